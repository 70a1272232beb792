#include <doctest.h>

#include "maxavg/tf/packets.hpp"
#include "maxavg/tf/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace maxavg;
using namespace maxavg::tf;

namespace {

SampleGrid grid(double x0, double h, std::size_t n) {
  SampleGrid g;
  g.x0 = x0;
  g.h = h;
  g.count = n;
  return g;
}

}  // namespace

TEST_CASE("reference bump") {
  const BumpSpec& b = reference_bump();
  CHECK(b.hat(0.05) == 0);
  CHECK(b.hat(0.95) == 0);
  CHECK(b.hat(0.5) > 0);
  CHECK_FALSE(b.version.empty());
  // ||psi||_2 = 1 by Plancherel on a fine quadrature
  double s = 0, d = 1e-5;
  for (double xi = 0.1; xi < 0.9; xi += d) s += b.hat(xi) * b.hat(xi) * d;
  CHECK(s == doctest::Approx(1).epsilon(1e-4));
}

TEST_CASE("transforms invert each other") {
  SampleGrid g = grid(-3, 1.0 / 16, 128);
  Rng rng(5);
  SampledFunction f = band_limited_noise(g, -3, 3, rng);
  SampledFunction back = inverse_transform(forward_transform(f), g);
  for (std::size_t n = 0; n < g.count; ++n) CHECK(std::abs(back.values[n] - f.values[n]) < 1e-12);
}

TEST_CASE("Gabor packets are normalised") {
  SampleGrid g = grid(-64, 1.0 / 128, 1 << 14);
  const BumpSpec& b = reference_bump();
  SampledFunction base = gabor_packet(b, 0, 0, 0, g);
  CHECK(base.norm() == doctest::Approx(1).epsilon(0.02));
  for (long i : {-2L, -1L, 0L, 1L, 2L})
    for (double m : {-3.0, 0.0, 2.5})
      for (double l : {-4.0, 0.0, 7.0}) CHECK(gabor_packet(b, i, m, l, g).norm() == doctest::Approx(1).epsilon(0.02));
}

TEST_CASE("packets with disjoint frequency supports are orthogonal") {
  Tile p = Tile::make(DyadicInterval(0, 0, 0), DyadicInterval(0, 0, 3));
  Tile q = Tile::make(DyadicInterval(0, 0, 1), DyadicInterval(0, 0, 5));
  SampleGrid g = choose_grid({p, q});
  Spectrum sp = packet_spectrum(p, g), sq = packet_spectrum(q, g);
  CHECK(std::abs(spectral_inner(sq, sp, g)) < 1e-10);
  CHECK(std::abs(samples_of(sq, g).inner(samples_of(sp, g))) < 1e-10);
  // same tile: spectral and sampled inner products agree
  SampledFunction fp = samples_of(sp, g);
  CHECK(std::abs(spectral_inner(sp, sp, g) - fp.inner(fp)) < 1e-10);
  CHECK(fp.norm() == doctest::Approx(1).epsilon(0.02));
}

TEST_CASE("packet coefficients and synthesis are adjoint") {
  Tile p = Tile::make(DyadicInterval(0, 1, 0), DyadicInterval(0, -1, 2));
  Tile q = Tile::make(DyadicInterval(0, 0, 1), DyadicInterval(1, 0, 3));
  SampleGrid g = choose_grid({p, q});
  std::vector<Spectrum> packets{packet_spectrum(p, g), packet_spectrum(q, g)};
  Rng rng(8);
  SampledFunction f = band_limited_noise(g, -2, 8, rng);
  std::vector<Complex> a{{0.3, -1.0}, {2.0, 0.5}};
  auto c = packet_coefficients(f, packets);
  // <f, sum a psi> = sum conj(a) <f, psi>
  Complex lhs = f.inner(synthesize(packets, a, g));
  Complex rhs = std::conj(a[0]) * c[0] + std::conj(a[1]) * c[1];
  CHECK(std::abs(lhs - rhs) < 1e-9 * (1 + std::abs(rhs)));
}

TEST_CASE("modified packets") {
  Tile p = Tile::make(DyadicInterval(0, 0, 0), DyadicInterval(0, 0, 2));
  SampleGrid g = choose_grid({p});
  SampledFunction psi = samples_of(packet_spectrum(p, g), g);

  SampledFunction same = modified_packet(psi, p, CutoffFunction::constant(kCutoffNever));
  for (std::size_t n = 0; n < g.count; ++n) CHECK(same.values[n] == psi.values[n]);

  SampledFunction none = modified_packet(psi, p, CutoffFunction::constant(40));
  for (const auto& v : none.values) CHECK(v == Complex(0, 0));

  // |I| = 1 > 2^k exactly where k < 0
  double mid = g.x0 + g.period() / 2;
  CutoffFunction mixed;
  mixed.cells = {{g.x0, mid, -1}, {mid, g.x0 + g.period(), 3}};
  mixed.validate(g);
  SampledFunction half = modified_packet(psi, p, mixed);
  for (std::size_t n = 0; n < g.count; ++n) {
    if (g.x(n) < mid) CHECK(half.values[n] == psi.values[n]);
    else CHECK(half.values[n] == Complex(0, 0));
  }
  CutoffFunction gap;
  gap.cells = {{g.x0, mid, 0}};
  CHECK_THROWS(gap.validate(g));
}

TEST_CASE("choose_grid resolves every tile") {
  std::vector<Tile> tiles{Tile::make(DyadicInterval(0, 2, 1), DyadicInterval(0, -2, 3)),
                          Tile::make(DyadicInterval(0, -1, 0), DyadicInterval(2, 1, -4))};
  SampleGrid g = choose_grid(tiles);
  CHECK(g.h <= 0.25 / 64);
  for (const auto& t : tiles) {
    CHECK(g.x0 <= to_double(t.time.lo()));
    CHECK(g.x0 + g.period() >= to_double(t.time.hi()));
    CHECK(std::abs(to_double(t.freq.hi())) < 0.5 / g.h);
    CHECK(std::abs(to_double(t.freq.lo())) < 0.5 / g.h);
  }
}

TEST_CASE("sampled functions round trip through disk") {
  SampleGrid g = grid(-1.5, 1.0 / 8, 64);
  Rng rng(3);
  SampledFunction f = band_limited_noise(g, -2, 2, rng);
  auto stem = (std::filesystem::temp_directory_path() / "maxavg_sampled_rt").string();
  write_sampled(stem, f, 3);
  SampledFunction back = read_sampled(stem);
  CHECK(back.grid.x0 == g.x0);
  CHECK(back.grid.h == g.h);
  CHECK(back.grid.count == g.count);
  CHECK(back.values == f.values);
  std::remove((stem + ".json").c_str());
  std::remove((stem + ".bin").c_str());
}
