#include "maxavg/tf/packets.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace maxavg::tf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Plans {
  fftw_plan forward, backward;
};

// FFTW planning is not thread safe; execution with fresh fftw_malloc buffers is.
Plans plans_for(std::size_t n) {
  static std::mutex lock;
  static std::map<std::size_t, Plans> cache;
  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  int size = static_cast<int>(n);
  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  Plans p{fftw_plan_dft_1d(size, in, out, FFTW_FORWARD, FFTW_ESTIMATE),
          fftw_plan_dft_1d(size, in, out, FFTW_BACKWARD, FFTW_ESTIMATE)};
  fftw_free(in);
  fftw_free(out);
  cache.emplace(n, p);
  return p;
}

std::vector<Complex> run(const std::vector<Complex>& data, bool forward) {
  std::size_t n = data.size();
  if (n == 0) return {};
  Plans p = plans_for(n);
  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = data[i].real();
    in[i][1] = data[i].imag();
  }
  fftw_execute_dft(forward ? p.forward : p.backward, in, out);
  std::vector<Complex> res(n);
  for (std::size_t i = 0; i < n; ++i) res[i] = Complex(out[i][0], out[i][1]);
  fftw_free(in);
  fftw_free(out);
  return res;
}

std::size_t bin_of(long k, std::size_t n) {
  long m = static_cast<long>(n);
  long r = k % m;
  return static_cast<std::size_t>(r < 0 ? r + m : r);
}

double bump_mass() {
  // integral over (-1, 1) of exp(-2 / (1 - t^2)), composite Simpson
  const int panels = 200000;
  double h = 2.0 / panels, sum = 0;
  for (int i = 0; i <= panels; ++i) {
    double t = -1 + i * h;
    double v = (std::fabs(t) >= 1) ? 0.0 : std::exp(-2.0 / (1 - t * t));
    double w = (i == 0 || i == panels) ? 1 : (i % 2 ? 4 : 2);
    sum += w * v;
  }
  return sum * h / 3;
}

}  // namespace

long SampleGrid::frequency_index(std::size_t bin) const {
  long b = static_cast<long>(bin), n = static_cast<long>(count);
  return b < (n + 1) / 2 ? b : b - n;
}

Complex SampledFunction::inner(const SampledFunction& other) const {
  if (other.values.size() != values.size()) throw std::invalid_argument("sampled functions on different grids");
  Complex s = 0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * std::conj(other.values[i]);
  return s * grid.h;
}

double SampledFunction::norm() const {
  double s = 0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s * grid.h);
}

double BumpSpec::hat(double xi) const {
  double t = (xi - centre) / half_width;
  if (std::fabs(t) >= 1) return 0;
  return scale * std::exp(-1.0 / (1 - t * t));
}

const BumpSpec& reference_bump() {
  static const BumpSpec bump = [] {
    BumpSpec b;
    b.version = "smooth-bump-v1";
    b.scale = 1.0 / std::sqrt(b.half_width * bump_mass());
    return b;
  }();
  return bump;
}

Spectrum packet_spectrum(double a, double length, double b, const SampleGrid& grid, const BumpSpec& bump) {
  double p = grid.period();
  if (p < 10 * length) throw std::invalid_argument("sample window shorter than 10 time widths");
  double w = 1.0 / length;
  double lo = b + (bump.centre - bump.half_width) * w, hi = b + (bump.centre + bump.half_width) * w;
  long k0 = static_cast<long>(std::ceil(p * lo)), k1 = static_cast<long>(std::floor(p * hi));
  long half = static_cast<long>(grid.count) / 2;
  if (k0 <= -half || k1 >= half) throw std::invalid_argument("packet frequency support exceeds the Nyquist band");
  Spectrum s;
  s.first = k0;
  double amp = std::sqrt(length);
  for (long k = k0; k <= k1; ++k) {
    double nu = static_cast<double>(k) / p;
    double phase = -kTwoPi * a * (nu - b) + kTwoPi * nu * grid.x0;
    s.coef.push_back(amp * bump.hat(length * (nu - b)) * std::polar(1.0, phase));
  }
  return s;
}

Spectrum packet_spectrum(const Tile& tile, const SampleGrid& grid, const BumpSpec& bump) {
  return packet_spectrum(to_double(tile.time.lo()), to_double(tile.time.length()), to_double(tile.freq.lo()), grid, bump);
}

SampledFunction samples_of(const Spectrum& s, const SampleGrid& grid) {
  std::vector<Complex> g(grid.count);
  for (std::size_t i = 0; i < s.coef.size(); ++i) g[bin_of(s.first + static_cast<long>(i), grid.count)] += s.coef[i];
  SampledFunction f{grid, run(g, false)};
  double inv = 1.0 / grid.period();
  for (auto& v : f.values) v *= inv;
  return f;
}

SampledFunction gabor_packet(const BumpSpec& bump, long i, double m, double l, const SampleGrid& grid) {
  double len = std::ldexp(1.0, static_cast<int>(i));
  return samples_of(packet_spectrum(len * m, len, l / len, grid, bump), grid);
}

std::vector<Complex> forward_transform(const SampledFunction& f) { return run(f.values, true); }

SampledFunction inverse_transform(const std::vector<Complex>& spectrum, const SampleGrid& grid) {
  SampledFunction f{grid, run(spectrum, false)};
  double inv = 1.0 / static_cast<double>(grid.count);
  for (auto& v : f.values) v *= inv;
  return f;
}

namespace {

Complex pair_with(const std::vector<Complex>& transform, const Spectrum& s, std::size_t n) {
  Complex acc = 0;
  for (std::size_t i = 0; i < s.coef.size(); ++i)
    acc += transform[bin_of(s.first + static_cast<long>(i), n)] * std::conj(s.coef[i]);
  return acc / static_cast<double>(n);
}

}  // namespace

std::vector<Complex> packet_coefficients(const SampledFunction& f, const std::vector<Spectrum>& packets) {
  auto t = forward_transform(f);
  std::vector<Complex> out;
  out.reserve(packets.size());
  for (const auto& p : packets) out.push_back(pair_with(t, p, f.grid.count));
  return out;
}

SampledFunction synthesize(const std::vector<Spectrum>& packets, const std::vector<Complex>& a, const SampleGrid& grid) {
  if (a.size() != packets.size()) throw std::invalid_argument("one coefficient per packet expected");
  std::vector<Complex> g(grid.count);
  for (std::size_t p = 0; p < packets.size(); ++p)
    for (std::size_t i = 0; i < packets[p].coef.size(); ++i)
      g[bin_of(packets[p].first + static_cast<long>(i), grid.count)] += a[p] * packets[p].coef[i];
  SampledFunction f{grid, run(g, false)};
  double inv = 1.0 / grid.period();
  for (auto& v : f.values) v *= inv;
  return f;
}

Complex spectral_inner(const Spectrum& q, const Spectrum& p, const SampleGrid& grid) {
  long lo = std::max(q.first, p.first);
  long hi = std::min(q.first + static_cast<long>(q.coef.size()), p.first + static_cast<long>(p.coef.size()));
  Complex acc = 0;
  for (long k = lo; k < hi; ++k) acc += q.coef[k - q.first] * std::conj(p.coef[k - p.first]);
  return acc / grid.period();
}

CutoffFunction CutoffFunction::constant(long value) {
  return CutoffFunction{{{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), value}}};
}

long CutoffFunction::at(double x) const {
  auto it = std::upper_bound(cells.begin(), cells.end(), x, [](double v, const Cell& c) { return v < c.hi; });
  if (it == cells.end() || x < it->lo) throw std::out_of_range("cutoff function undefined at sample point");
  return it->value;
}

void CutoffFunction::validate(const SampleGrid& grid) const {
  if (cells.empty()) throw std::invalid_argument("cutoff function has no cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!(cells[i].lo < cells[i].hi)) throw std::invalid_argument("empty cutoff cell");
    if (i > 0 && cells[i].lo != cells[i - 1].hi) throw std::invalid_argument("cutoff cells must be contiguous");
  }
  if (cells.front().lo > grid.x0 || cells.back().hi < grid.x0 + grid.period())
    throw std::invalid_argument("cutoff cells do not cover the window");
}

SampledFunction modified_packet(const SampledFunction& packet, const Tile& tile, const CutoffFunction& k) {
  k.validate(packet.grid);
  long threshold = -tile.time.scale();  // |I| = 2^threshold
  SampledFunction out = packet;
  for (std::size_t n = 0; n < out.values.size(); ++n)
    if (!(k.at(packet.grid.x(n)) < threshold)) out.values[n] = 0;
  return out;
}

std::vector<Complex> modified_coefficients(const SampledFunction& f, const std::vector<Tile>& tiles,
                                           const std::vector<Spectrum>& packets, const CutoffFunction& k) {
  if (tiles.size() != packets.size()) throw std::invalid_argument("one spectrum per tile expected");
  k.validate(f.grid);
  std::vector<long> cut(f.grid.count);
  for (std::size_t n = 0; n < cut.size(); ++n) cut[n] = k.at(f.grid.x(n));
  std::map<long, std::vector<std::size_t>> by_scale;
  for (std::size_t t = 0; t < tiles.size(); ++t) by_scale[tiles[t].time.scale()].push_back(t);
  std::vector<Complex> out(tiles.size());
  for (const auto& [scale, members] : by_scale) {
    SampledFunction g = f;
    for (std::size_t n = 0; n < cut.size(); ++n)
      if (!(cut[n] < -scale)) g.values[n] = 0;
    auto t = forward_transform(g);
    for (std::size_t idx : members) out[idx] = pair_with(t, packets[idx], f.grid.count);
  }
  return out;
}

SampleGrid choose_grid(const std::vector<Tile>& tiles, const BumpSpec& bump, double refine) {
  if (tiles.empty()) throw std::invalid_argument("no tiles to fit a grid to");
  double lmin = std::numeric_limits<double>::infinity(), numax = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& t : tiles) {
    double len = to_double(t.time.length());
    double c = to_double(t.time.center());
    lmin = std::min(lmin, len);
    lo = std::min(lo, c - 10 * len);
    hi = std::max(hi, c + 10 * len);
    double b = to_double(t.freq.lo()), w = to_double(t.freq.length());
    numax = std::max({numax, std::fabs(b + (bump.centre - bump.half_width) * w),
                      std::fabs(b + (bump.centre + bump.half_width) * w)});
  }
  double h = lmin / 64;
  if (numax > 0) h = std::min(h, 1.0 / (2.2 * numax));
  h /= refine;
  h = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(h))));
  double need = (hi - lo) / h;
  if (need > double(1 << 24)) throw std::invalid_argument("sample grid would exceed 2^24 points");
  std::size_t n = 1;
  while (static_cast<double>(n) < need) n <<= 1;
  return SampleGrid{lo, h, n};
}

SampledFunction band_limited_noise(const SampleGrid& grid, double lo, double hi, Rng& rng) {
  double p = grid.period();
  long k0 = static_cast<long>(std::ceil(p * lo)), k1 = static_cast<long>(std::floor(p * hi));
  long half = static_cast<long>(grid.count) / 2;
  k0 = std::max(k0, -half + 1);
  k1 = std::min(k1, half - 1);
  std::vector<Complex> g(grid.count);
  for (long k = k0; k <= k1; ++k) {
    double re = rng.normal(), im = rng.normal();
    g[bin_of(k, grid.count)] = Complex(re, im);
  }
  return inverse_transform(g, grid);
}

}  // namespace maxavg::tf
