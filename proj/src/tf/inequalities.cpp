#include "maxavg/tf/inequalities.hpp"

#include "maxavg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace maxavg::tf {

namespace {

std::size_t bin(long k, std::size_t n) {
  long m = static_cast<long>(n);
  long r = k % m;
  return static_cast<std::size_t>(r < 0 ? r + m : r);
}

double sq_norm(const std::vector<Complex>& v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

}  // namespace

double synthesis_ratio(const std::vector<Spectrum>& packets, const std::vector<Complex>& a, const SampleGrid& grid) {
  double den = sq_norm(a);
  if (den == 0) return 0;
  double num = synthesize(packets, a, grid).norm();
  return num * num / den;
}

double analysis_ratio(const std::vector<Spectrum>& packets, const SampledFunction& f) {
  double den = f.norm();
  if (den == 0) return 0;
  return sq_norm(packet_coefficients(f, packets)) / (den * den);
}

std::vector<std::vector<Complex>> gram_matrix(const std::vector<Spectrum>& packets, const SampleGrid& grid) {
  std::size_t n = packets.size();
  std::vector<std::vector<Complex>> g(n, std::vector<Complex>(n));
  parallel_for(n, [&](std::size_t p) {
    for (std::size_t q = 0; q < n; ++q) g[p][q] = spectral_inner(packets[q], packets[p], grid);  // <psi_q, psi_p>
  });
  return g;
}

double FrameBounds::relative_gap() const {
  double m = std::max(synthesis_sup, analysis_sup);
  return m > 0 ? std::fabs(synthesis_sup - analysis_sup) / m : 0;
}

FrameBounds frame_bounds(const std::vector<Spectrum>& packets, const SampleGrid& grid, std::uint64_t seed,
                         int max_iterations, double tolerance) {
  FrameBounds out;
  std::size_t n = packets.size();
  if (n == 0) return out;
  const double period = grid.period();

  // synthesis side: a <- G a with G[p][q] = <psi_q, psi_p>, so ||sum a psi||^2 = a* G a
  auto g = gram_matrix(packets, grid);
  Rng rng(derive_seed(seed, "frame-synthesis"));
  std::vector<Complex> a(n);
  for (auto& x : a) x = Complex(rng.normal(), rng.normal());
  double lambda = 0;
  for (int it = 1; it <= max_iterations; ++it) {
    double norm = std::sqrt(sq_norm(a));
    for (auto& x : a) x /= norm;
    std::vector<Complex> b(n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) b[p] += g[p][q] * a[q];
    double next = 0;
    for (std::size_t p = 0; p < n; ++p) next += std::real(std::conj(a[p]) * b[p]);
    a = std::move(b);
    out.synthesis_iterations = it;
    bool done = it > 1 && std::fabs(next - lambda) <= tolerance * std::fabs(next);
    lambda = next;
    if (done) break;
  }
  out.synthesis_sup = lambda;

  // analysis side: f <- sum <f, psi_P> psi_P, with f kept as packet-style spectral coefficients
  long lo = packets.front().first, hi = lo;
  for (const auto& p : packets) {
    lo = std::min(lo, p.first);
    hi = std::max(hi, p.first + static_cast<long>(p.coef.size()));
  }
  std::vector<Complex> f(static_cast<std::size_t>(hi - lo));
  Rng frng(derive_seed(seed, "frame-analysis"));
  for (auto& x : f) x = Complex(frng.normal(), frng.normal());
  auto coefficient = [&](const std::vector<Complex>& v, const Spectrum& p) {
    Complex acc = 0;
    for (std::size_t i = 0; i < p.coef.size(); ++i) acc += v[p.first + i - lo] * std::conj(p.coef[i]);
    return acc / period;
  };
  lambda = 0;
  for (int it = 1; it <= max_iterations; ++it) {
    double norm = std::sqrt(sq_norm(f) / period);
    for (auto& x : f) x /= norm;
    std::vector<Complex> next_f(f.size());
    double next = 0;
    for (const auto& p : packets) {
      Complex c = coefficient(f, p);
      next += std::norm(c);
      for (std::size_t i = 0; i < p.coef.size(); ++i) next_f[p.first + i - lo] += c * p.coef[i];
    }
    f = std::move(next_f);
    out.analysis_iterations = it;
    bool done = it > 1 && std::fabs(next - lambda) <= tolerance * std::fabs(next);
    lambda = next;
    if (done) break;
  }
  out.analysis_sup = lambda;
  return out;
}

double RmResult::ratio() const {
  if (b_emp <= 0) return 0;
  return maximal / (b_emp * std::log(2.0 + static_cast<double>(count)));
}

bool RmResult::blocks_ok() const {
  for (double e : block_energy)
    if (e > b_emp * b_emp * (1 + 1e-9)) return false;
  return true;
}

namespace {

void walsh_rows(std::vector<std::vector<double>>& m) {
  std::size_t n = m.size();
  for (std::size_t len = 1; len < n; len <<= 1)
    for (std::size_t i = 0; i < n; i += 2 * len)
      for (std::size_t k = i; k < i + len; ++k)
        for (std::size_t c = 0; c < n; ++c) {
          double x = m[k][c], y = m[k + len][c];
          m[k][c] = x + y;
          m[k + len][c] = x - y;
        }
}

void walsh_columns(std::vector<std::vector<double>>& m) {
  std::size_t n = m.size();
  for (auto& row : m)
    for (std::size_t len = 1; len < n; len <<= 1)
      for (std::size_t i = 0; i < n; i += 2 * len)
        for (std::size_t k = i; k < i + len; ++k) {
          double x = row[k], y = row[k + len];
          row[k] = x + y;
          row[k + len] = x - y;
        }
}

}  // namespace

RmResult rm_maximal(const std::vector<SampledFunction>& f, std::size_t random_patterns, std::uint64_t seed) {
  RmResult out;
  std::size_t L = f.size();
  out.count = L;
  if (L == 0) return out;
  const SampleGrid& grid = f.front().grid;
  std::size_t n = grid.count;
  for (const auto& x : f)
    if (x.values.size() != n) throw std::invalid_argument("rm_maximal: functions on different grids");

  // real part of the Gram matrix decides every signed norm
  std::vector<std::vector<double>> g(L, std::vector<double>(L));
  parallel_for(L, [&](std::size_t l) {
    for (std::size_t m = l; m < L; ++m) g[l][m] = std::real(f[l].inner(f[m]));
  });
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t m = 0; m < l; ++m) g[l][m] = g[m][l];

  std::size_t levels = 0;
  while ((std::size_t{1} << levels) < L) ++levels;
  std::size_t width = std::size_t{1} << levels;
  double best = 0;
  for (std::size_t k = 0; k <= levels; ++k) {
    std::size_t blocks = std::size_t{1} << k, size = width >> k;
    std::vector<std::vector<double>> gb(blocks, std::vector<double>(blocks, 0));
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t m = 0; m < L; ++m) gb[l / size][m / size] += g[l][m];
    double trace = 0;
    for (std::size_t b = 0; b < blocks; ++b) trace += gb[b][b];
    out.block_energy.push_back(trace);
    walsh_rows(gb);
    walsh_columns(gb);
    for (std::size_t w = 0; w < blocks; ++w) best = std::max(best, gb[w][w]);
    out.patterns += blocks;
  }
  Rng rng(derive_seed(seed, "rm-signs"));
  std::vector<double> eps(L);
  for (std::size_t r = 0; r < random_patterns; ++r) {
    for (auto& e : eps) e = rng.sign();
    double v = 0;
    for (std::size_t l = 0; l < L; ++l) {
      double row = 0;
      for (std::size_t m = 0; m < L; ++m) row += g[l][m] * eps[m];
      v += eps[l] * row;
    }
    best = std::max(best, v);
    ++out.patterns;
  }
  out.b_emp = std::sqrt(std::max(best, 0.0));

  std::vector<double> sup(n, 0);
  std::vector<Complex> partial(n);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t x = 0; x < n; ++x) {
      partial[x] += f[l].values[x];
      sup[x] = std::max(sup[x], std::abs(partial[x]));
    }
  double s = 0;
  for (double v : sup) s += v * v;
  out.maximal = std::sqrt(s * grid.h);
  return out;
}

std::vector<SampledFunction> orthogonal_family(const SampleGrid& grid, std::size_t count, std::uint64_t seed,
                                               bool unit) {
  std::size_t usable = grid.count / 2 - 1;
  if (count == 0 || usable < count) throw std::invalid_argument("orthogonal_family: grid too small for the family");
  Rng rng(derive_seed(seed, "orthogonal-family"));
  std::vector<long> bins;
  for (std::size_t k = 1; k <= usable; ++k) bins.push_back(static_cast<long>(k) * (rng.coin() ? 1 : -1));
  for (std::size_t k = bins.size(); k > 1; --k)
    std::swap(bins[k - 1], bins[static_cast<std::size_t>(rng.integer(0, static_cast<long>(k) - 1))]);
  std::size_t per = usable / count;
  std::vector<SampledFunction> out;
  for (std::size_t l = 0; l < count; ++l) {
    std::vector<Complex> spectrum(grid.count);
    double amp = std::exp(rng.normal());
    for (std::size_t k = l * per; k < (l + 1) * per; ++k)
      spectrum[bin(bins[k], grid.count)] = amp * Complex(rng.normal(), rng.normal());
    SampledFunction g = inverse_transform(spectrum, grid);
    if (unit) {
      double nrm = g.norm();
      for (auto& v : g.values) v /= nrm;
    }
    out.push_back(std::move(g));
  }
  return out;
}

ProjectionResult projection_maximal(const SampledFunction& f, const std::vector<double>& centres,
                                    const std::vector<long>& scales, double c0) {
  ProjectionResult out;
  out.centres = centres.size();
  out.scales = scales.size();
  double nf = f.norm();
  if (nf == 0) return out;
  auto t = forward_transform(f);
  std::size_t n = f.grid.count;
  double period = f.grid.period();
  std::vector<double> sup(n, 0);
  for (long k : scales) {
    double radius = c0 * std::ldexp(1.0, static_cast<int>(-k));
    std::vector<Complex> masked(n);
    for (std::size_t b = 0; b < n; ++b) {
      double nu = static_cast<double>(f.grid.frequency_index(b)) / period;
      for (double c : centres)
        if (std::fabs(nu - c) <= radius) {
          masked[b] = t[b];
          break;
        }
    }
    SampledFunction g = inverse_transform(masked, f.grid);
    for (std::size_t x = 0; x < n; ++x) sup[x] = std::max(sup[x], std::abs(g.values[x]));
  }
  double s = 0;
  for (double v : sup) s += v * v;
  out.ratio = std::sqrt(s * f.grid.h) / nf;
  return out;
}

double chi_power_integral(double centre, double length, int n, double a, double b) {
  if (n < 0 || n % 2 != 0) throw std::invalid_argument("chi_power_integral: decay exponent must be even");
  if (b <= a) return 0;
  if (n == 0) return b - a;
  int m = n / 2;
  auto anti = [m](double t) {
    double j = std::atan(t);
    for (int k = 2; k <= m; ++k) {
      double kk = static_cast<double>(k);
      j = t / (2 * (kk - 1) * std::pow(1 + t * t, kk - 1)) + (2 * kk - 3) / (2 * kk - 2) * j;
    }
    return j;
  };
  return length * (anti((b - centre) / length) - anti((a - centre) / length));
}

double IntervalUnion::measure() const {
  double s = 0;
  for (const auto& [lo, hi] : parts) s += hi - lo;
  return s;
}

bool IntervalUnion::contains(double x) const {
  for (const auto& [lo, hi] : parts)
    if (lo <= x && x < hi) return true;
  return false;
}

std::vector<DyadicInterval> time_convexification(const std::vector<Multitile>& s) {
  std::set<DyadicInterval> tops, out;
  long coarsest = 0;
  bool first = true;
  for (const auto& m : s) {
    tops.insert(m.time());
    coarsest = first ? m.time().scale() : std::min(coarsest, m.time().scale());
    first = false;
  }
  for (const auto& m : s) {
    DyadicInterval i = m.time();
    while (true) {
      bool inside = false;
      for (const auto& t : tops)
        if (t.contains(i)) {
          inside = true;
          break;
        }
      if (inside) out.insert(i);
      if (i.scale() <= coarsest) break;
      i = i.parent();
    }
  }
  return {out.begin(), out.end()};
}

SizeEstimate size_estimate_check(const std::vector<Multitile>& s, const CoefficientTable& coef, int j,
                                 const IntervalUnion& e, int n_decay, const RankOneParams& params) {
  SizeEstimate out;
  if (s.empty()) return out;
  TreeOrder order(s);
  std::vector<char> all(s.size(), 1);
  out.lhs = tree_size(order, coef, all, all, j, params).size;
  double best = -1;
  for (const auto& i : time_convexification(s)) {
    double len = to_double(i.length()), c = to_double(i.center());
    double mass = 0;
    for (const auto& [lo, hi] : e.parts) mass += chi_power_integral(c, len, n_decay, lo, hi);
    if (mass / len > best) {
      best = mass / len;
      out.witness = i;
    }
  }
  out.rhs = std::sqrt(e.measure()) * std::max(best, 0.0);
  return out;
}

}  // namespace maxavg::tf
