#pragma once

#include "maxavg/random.hpp"
#include "maxavg/tf/tiles.hpp"

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace maxavg::tf {

using Complex = std::complex<double>;

// Periodic sample grid x_n = x0 + n h, n < count; period P = count * h.
struct SampleGrid {
  double x0 = 0;
  double h = 1;
  std::size_t count = 0;
  double period() const { return h * static_cast<double>(count); }
  double x(std::size_t n) const { return x0 + h * static_cast<double>(n); }
  // signed frequency index of FFT bin b
  long frequency_index(std::size_t bin) const;
};

struct SampledFunction {
  SampleGrid grid;
  std::vector<Complex> values;

  static SampledFunction zeros(const SampleGrid& g) { return {g, std::vector<Complex>(g.count)}; }
  // h * sum f conj(g)
  Complex inner(const SampledFunction& other) const;
  double norm() const;
};

// psi-hat(xi) = scale * exp(-1 / (1 - t^2)), t = (xi - 0.5) / 0.4, supported in [0.1, 0.9], ||psi||_2 = 1.
struct BumpSpec {
  std::string version;
  double centre = 0.5, half_width = 0.4;
  double scale = 1;
  double hat(double xi) const;
};
const BumpSpec& reference_bump();

// Coefficients of the periodised packet relative to the grid origin: f(x_n) = (1/P) sum_k g_k e^{2 pi i k n / N}.
struct Spectrum {
  long first = 0;
  std::vector<Complex> coef;
};

// Packet adapted to the tile: |I|^{-1/2} psi((x - a)/|I|) e^{2 pi i b x}, I = [a, a+|I|], omega = [b, b+|omega|].
Spectrum packet_spectrum(const Tile& tile, const SampleGrid& grid, const BumpSpec& bump = reference_bump());
Spectrum packet_spectrum(double a, double length, double b, const SampleGrid& grid, const BumpSpec& bump = reference_bump());
SampledFunction samples_of(const Spectrum& s, const SampleGrid& grid);

// 2^{-i/2} psi(2^{-i} x - m) e^{2 pi i 2^{-i} x l}
SampledFunction gabor_packet(const BumpSpec& bump, long i, double m, double l, const SampleGrid& grid);

std::vector<Complex> forward_transform(const SampledFunction& f);
SampledFunction inverse_transform(const std::vector<Complex>& spectrum, const SampleGrid& grid);  // (1/N) scaling

// <f, psi_P> for each spectrum.
std::vector<Complex> packet_coefficients(const SampledFunction& f, const std::vector<Spectrum>& packets);
// Samples of sum_P a_P psi_P.
SampledFunction synthesize(const std::vector<Spectrum>& packets, const std::vector<Complex>& a, const SampleGrid& grid);
// <psi_Q, psi_P> without leaving the frequency side.
Complex spectral_inner(const Spectrum& q, const Spectrum& p, const SampleGrid& grid);

// Piecewise constant integer function; cells are [lo, hi) and must cover the window.
struct CutoffFunction {
  struct Cell {
    double lo, hi;
    long value;
  };
  std::vector<Cell> cells;

  static CutoffFunction constant(long value);
  long at(double x) const;
  void validate(const SampleGrid& grid) const;
};
constexpr long kCutoffNever = -(1L << 40);  // k = -infinity sentinel

SampledFunction modified_packet(const SampledFunction& packet, const Tile& tile, const CutoffFunction& k);
// <f, psi_P 1_{|I_P| > 2^k}> for each tile, grouped by time scale.
std::vector<Complex> modified_coefficients(const SampledFunction& f, const std::vector<Tile>& tiles,
                                           const std::vector<Spectrum>& packets, const CutoffFunction& k);

// Grid fine enough for every tile (h <= |I_min| / 64 and below Nyquist) over the union of 20|I| neighbourhoods.
SampleGrid choose_grid(const std::vector<Tile>& tiles, const BumpSpec& bump = reference_bump(), double refine = 1);

// Random trigonometric polynomial with frequencies in [lo, hi].
SampledFunction band_limited_noise(const SampleGrid& grid, double lo, double hi, Rng& rng);

}  // namespace maxavg::tf
