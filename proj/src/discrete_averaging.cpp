#include "maxavg/discrete_averaging.hpp"

#include "maxavg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace maxavg {

IntMatrix integer_matrix(const AveragingMatrix& a) {
  IntMatrix out(a.rows, std::vector<long>(a.cols));
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      const Rational& q = a.entries[i][j];
      if (!is_integer(q) || !q.get_num().fits_slong_p())
        throw std::invalid_argument("non-integer matrix entry " + to_string(q));
      out[i][j] = q.get_num().get_si();
    }
  return out;
}

namespace {

std::size_t cols_of(const IntMatrix& a) {
  if (a.empty() || a[0].empty()) throw std::invalid_argument("empty averaging matrix");
  return a[0].size();
}

void check_signals(const IntMatrix& a, const std::vector<Signal>& s) {
  if (s.size() != a.size()) throw std::invalid_argument("need one signal per matrix row");
}

RationalMatrix to_rational(const IntMatrix& a) {
  RationalMatrix r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (long v : a[i]) r[i].push_back(Rational(v));
  return r;
}

double term(const IntMatrix& a, const std::vector<Signal>& s, long x, const std::vector<long>& n, bool absolute) {
  double prod = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    long y = x;
    for (std::size_t j = 0; j < n.size(); ++j) y += a[i][j] * n[j];
    double v = s[i].at(y);
    if (v == 0.0) return 0.0;
    prod *= absolute ? std::abs(v) : v;
  }
  return prod;
}

// Sum of term over {n : max|n_j| = N} (N = 0 gives the origin).
double shell_sum(const IntMatrix& a, const std::vector<Signal>& s, long x, long N, bool absolute) {
  const std::size_t m = cols_of(a);
  std::vector<long> n(m, 0);
  if (N == 0) return term(a, s, x, n, absolute);
  double total = 0;
  for (std::size_t k = 0; k < m; ++k) {
    // coordinates before k stay strictly inside, coordinate k sits on the face
    std::vector<long> lo(m), hi(m);
    for (std::size_t j = 0; j < m; ++j) {
      lo[j] = j < k ? -(N - 1) : -N;
      hi[j] = j < k ? N - 1 : N;
    }
    if (k > 0 && N - 1 < 0) continue;
    for (long face : {-N, N}) {
      n = lo;
      n[k] = face;
      while (true) {
        total += term(a, s, x, n, absolute);
        std::size_t j = 0;
        for (; j < m; ++j) {
          if (j == k) continue;
          if (n[j] < hi[j]) {
            ++n[j];
            break;
          }
          n[j] = lo[j];
        }
        if (j == m) break;
      }
    }
  }
  return total;
}

struct BoundPlan {
  std::vector<std::size_t> rows;
  RationalMatrix abs_inverse;  // |B^-1|
};

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// First (lexicographic) set of `size` rows of r that is invertible as a square block.
BoundPlan make_plan(const RationalMatrix& r, std::size_t size) {
  if (r.size() < size) throw std::invalid_argument("maximal search needs rank(A) = m");
  std::vector<std::size_t> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  do {
    if (rows_independent(r, idx)) {
      RationalMatrix b;
      for (auto i : idx) b.push_back(r[i]);
      BoundPlan p{idx, invert(b)};
      for (auto& row : p.abs_inverse)
        for (auto& v : row) v = abs(v);
      return p;
    }
  } while (next_combination(idx, r.size()));
  throw std::invalid_argument("maximal search needs rank(A) = m");
}

long ceil_long(const Rational& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return c.get_si();
}

long plan_bound(const BoundPlan& plan, const std::vector<Signal>& trimmed, long x) {
  long best = 0;
  for (const auto& row : plan.abs_inverse) {
    Rational s = 0;
    for (std::size_t k = 0; k < plan.rows.size(); ++k) {
      const Signal& f = trimmed[plan.rows[k]];
      long r = std::max(std::abs(f.start - x), std::abs(f.last() - x));
      s += row[k] * r;
    }
    best = std::max(best, ceil_long(s));
  }
  return best;
}

std::vector<Signal> trim_all(const std::vector<Signal>& s) {
  std::vector<Signal> t;
  t.reserve(s.size());
  for (const auto& f : s) t.push_back(f.trimmed());
  return t;
}

bool any_empty(const std::vector<Signal>& s) {
  return std::any_of(s.begin(), s.end(), [](const Signal& f) { return f.empty(); });
}

MaximalValue maximal_with_plan(const IntMatrix& a, const std::vector<Signal>& t, long x, long cap,
                               const BoundPlan* plan) {
  MaximalValue best{0.0, 1};
  if (any_empty(t)) return best;
  long limit = cap > 0 ? cap : std::max(1L, plan_bound(*plan, t, x));
  if (cap > 0 && plan) limit = std::min(cap, std::max(1L, plan_bound(*plan, t, x)));
  const double m = static_cast<double>(cols_of(a));
  double sum = shell_sum(a, t, x, 0, true);
  bool first = true;
  for (long N = 1; N <= limit; ++N) {
    sum += shell_sum(a, t, x, N, true);
    double avg = sum / std::pow(static_cast<double>(2 * N + 1), m);
    if (first || avg > best.value) {
      best = {avg, N};
      first = false;
    }
  }
  return best;
}

}  // namespace

double average_at(const IntMatrix& a, const std::vector<Signal>& signals, long N, long x, bool absolute) {
  check_signals(a, signals);
  if (N < 1) throw std::invalid_argument("average needs N >= 1");
  const std::size_t m = cols_of(a);
  std::vector<long> n(m, -N);
  double total = 0;
  while (true) {
    total += term(a, signals, x, n, absolute);
    std::size_t j = 0;
    for (; j < m; ++j) {
      if (n[j] < N) {
        ++n[j];
        break;
      }
      n[j] = -N;
    }
    if (j == m) break;
  }
  return total / std::pow(static_cast<double>(2 * N + 1), static_cast<double>(m));
}

long search_bound(const IntMatrix& a, const std::vector<Signal>& signals, long x) {
  check_signals(a, signals);
  auto t = trim_all(signals);
  if (any_empty(t)) return 1;
  BoundPlan plan = make_plan(to_rational(a), cols_of(a));
  return std::max(1L, plan_bound(plan, t, x));
}

MaximalValue maximal_at(const IntMatrix& a, const std::vector<Signal>& signals, long x, long cap) {
  check_signals(a, signals);
  auto t = trim_all(signals);
  if (any_empty(t)) return {0.0, 1};
  if (cap > 0) {
    // the bound is only an optimisation here, so a rank-deficient matrix is fine
    try {
      BoundPlan plan = make_plan(to_rational(a), cols_of(a));
      return maximal_with_plan(a, t, x, cap, &plan);
    } catch (const std::invalid_argument&) {
      return maximal_with_plan(a, t, x, cap, nullptr);
    }
  }
  BoundPlan plan = make_plan(to_rational(a), cols_of(a));
  return maximal_with_plan(a, t, x, 0, &plan);
}

Signal maximal_operator(const IntMatrix& a, const std::vector<Signal>& signals, long lo, long hi, long cap) {
  check_signals(a, signals);
  if (hi < lo) throw std::invalid_argument("empty window");
  Signal out{lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0)};
  auto t = trim_all(signals);
  if (any_empty(t)) return out;
  std::optional<BoundPlan> plan;
  try {
    plan = make_plan(to_rational(a), cols_of(a));
  } catch (const std::invalid_argument&) {
    if (cap <= 0) throw;
  }
  parallel_for(out.values.size(), [&](std::size_t k) {
    out.values[k] = maximal_with_plan(a, t, lo + static_cast<long>(k), cap, plan ? &*plan : nullptr).value;
  });
  return out;
}

FiniteSystem::FiniteSystem(long n) : size(n) {
  if (n < 1) throw std::invalid_argument("system size must be >= 1");
}

namespace {

void check_functions(const IntMatrix& a, const FiniteSystem& sys, const std::vector<std::vector<double>>& f) {
  if (f.size() != a.size()) throw std::invalid_argument("need one function per matrix row");
  for (const auto& g : f)
    if (static_cast<long>(g.size()) != sys.size) throw std::invalid_argument("function length differs from system size");
}

double cyclic_term(const IntMatrix& a, const FiniteSystem& sys, const std::vector<std::vector<double>>& f, long x,
                   const std::vector<long>& l, bool absolute) {
  double prod = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    long k = 0;
    for (std::size_t j = 0; j < l.size(); ++j) k += a[i][j] * l[j];
    double v = f[i][static_cast<std::size_t>(sys.shift(x, k))];
    prod *= absolute ? std::abs(v) : v;
  }
  return prod;
}

// Sum over l in prod_j [lo, hi] of weight(l) * term; weight 1 when weights empty.
double box_sum(const IntMatrix& a, const FiniteSystem& sys, const std::vector<std::vector<double>>& f, long x, long lo,
               long hi, const std::vector<double>& weights, bool absolute) {
  const std::size_t m = cols_of(a);
  std::vector<long> l(m, lo);
  double total = 0;
  while (true) {
    double w = 1.0;
    if (!weights.empty())
      for (long v : l) w *= weights[static_cast<std::size_t>(v)];
    if (w != 0.0) total += w * cyclic_term(a, sys, f, x, l, absolute);
    std::size_t j = 0;
    for (; j < m; ++j) {
      if (l[j] < hi) {
        ++l[j];
        break;
      }
      l[j] = lo;
    }
    if (j == m) break;
  }
  return total;
}

}  // namespace

double ergodic_average(const IntMatrix& a, const FiniteSystem& sys, const std::vector<std::vector<double>>& f, long L,
                       long x, bool absolute) {
  check_functions(a, sys, f);
  if (L < 0) throw std::invalid_argument("L must be >= 0");
  const double m = static_cast<double>(cols_of(a));
  const long width = 2 * L + 1;
  double total;
  if (width <= sys.size) {
    total = box_sum(a, sys, f, x, -L, L, {}, absolute);
  } else {
    // fold the window onto residues: how many l in [-L, L] hit each class
    std::vector<double> counts(static_cast<std::size_t>(sys.size), 0.0);
    long full = width / sys.size, rest = width % sys.size;
    for (long r = 0; r < sys.size; ++r) counts[static_cast<std::size_t>(r)] = static_cast<double>(full);
    for (long t = 0; t < rest; ++t) counts[static_cast<std::size_t>(sys.shift(-L, t))] += 1.0;
    total = box_sum(a, sys, f, x, 0, sys.size - 1, counts, absolute);
  }
  return total / std::pow(static_cast<double>(width), m);
}

double period_mean(const IntMatrix& a, const FiniteSystem& sys, const std::vector<std::vector<double>>& f, long x,
                   bool absolute) {
  check_functions(a, sys, f);
  const double m = static_cast<double>(cols_of(a));
  return box_sum(a, sys, f, x, 0, sys.size - 1, {}, absolute) / std::pow(static_cast<double>(sys.size), m);
}

CubeSpec::CubeSpec(std::size_t dim) : m(dim) {
  if (dim < 1 || dim > 20) throw std::invalid_argument("cube dimension must be in [1, 20]");
}

std::vector<std::string> CubeSpec::labels() const {
  std::vector<std::string> out;
  for (std::size_t k = 1; k <= count(); ++k) {
    std::string s(m, '0');
    for (std::size_t j = 0; j < m; ++j)
      if ((k >> (m - 1 - j)) & 1U) s[j] = '1';
    out.push_back(s);
  }
  return out;
}

IntMatrix CubeSpec::matrix() const {
  IntMatrix out;
  for (const auto& label : labels()) {
    std::vector<long> row;
    for (char c : label) row.push_back(c == '1' ? 1 : 0);
    out.push_back(row);
  }
  return out;
}

double cube_average(const CubeSpec& spec, const FiniteSystem& sys, const std::vector<std::vector<double>>& f, long L,
                    long x, bool absolute) {
  if (f.size() != spec.count()) throw std::invalid_argument("missing function for some cube vertex");
  return ergodic_average(spec.matrix(), sys, f, L, x, absolute);
}

std::vector<double> convergence_probe(const IntMatrix& a, const FiniteSystem& sys,
                                      const std::vector<std::vector<double>>& f, const std::vector<long>& schedule,
                                      bool absolute) {
  for (std::size_t k = 1; k < schedule.size(); ++k)
    if (schedule[k] <= schedule[k - 1]) throw std::invalid_argument("L schedule must be increasing");
  std::vector<double> limit(static_cast<std::size_t>(sys.size));
  for (long x = 0; x < sys.size; ++x) limit[static_cast<std::size_t>(x)] = period_mean(a, sys, f, x, absolute);
  std::vector<double> out;
  for (long L : schedule) {
    std::vector<double> dev(static_cast<std::size_t>(sys.size));
    parallel_for(dev.size(), [&](std::size_t x) {
      dev[x] = std::abs(ergodic_average(a, sys, f, L, static_cast<long>(x), absolute) - limit[x]);
    });
    out.push_back(*std::max_element(dev.begin(), dev.end()));
  }
  return out;
}

double holder_baseline(const std::vector<Signal>& signals, const ExponentTuple& exponents, long x) {
  if (signals.size() != exponents.size()) throw std::invalid_argument("exponent tuple has wrong dimension");
  const Rational dual = exponents.dual();
  double out = 1.0;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    const Rational& xi = exponents.reciprocals[i];
    if (xi == 0) {
      out *= lp_norm(signals[i], kInfinity);
      continue;
    }
    double q = to_double(dual / xi);
    Signal g = signals[i];
    for (double& v : g.values) v = std::pow(std::abs(v), q);
    out *= std::pow(hl_maximal(g, x, x).values[0], 1.0 / q);
  }
  return out;
}

EvaluationWindow evaluation_window(const IntMatrix& a, const std::vector<Signal>& signals) {
  check_signals(a, signals);
  auto t = trim_all(signals);
  EvaluationWindow w;
  if (any_empty(t)) return w;
  long radius = 0;
  for (const auto& f : t) radius = std::max({radius, std::abs(f.start), std::abs(f.last())});
  RationalMatrix ext = to_rational(a);
  for (auto& row : ext) row.push_back(1);
  try {
    BoundPlan plan = make_plan(ext, cols_of(a) + 1);
    // x is the last coordinate of the solution (n, x) of the selected rows
    const auto& row = plan.abs_inverse.back();
    Rational s = 0;
    for (std::size_t k = 0; k < plan.rows.size(); ++k) {
      const Signal& f = t[plan.rows[k]];
      s += row[k] * std::max(std::abs(f.start), std::abs(f.last()));
    }
    long b = ceil_long(s);
    return {-b, b, true};
  } catch (const std::invalid_argument&) {
    return {-8 * std::max(1L, radius), 8 * std::max(1L, radius), false};
  }
}

double operator_ratio(const Signal& output, const std::vector<Signal>& signals, const ExponentTuple& exponents) {
  if (signals.size() != exponents.size()) throw std::invalid_argument("exponent tuple has wrong dimension");
  const Rational dual = exponents.dual();
  double p_out = dual == 0 ? kInfinity : 1.0 / to_double(dual);
  double denom = 1.0;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    const Rational& xi = exponents.reciprocals[i];
    denom *= lp_norm(signals[i], xi == 0 ? kInfinity : 1.0 / to_double(xi));
  }
  if (denom == 0.0) return 0.0;
  return lp_norm(output, p_out) / denom;
}

namespace {

double power_sum(const std::vector<double>& v, double p) {
  if (std::isinf(p)) {
    double m = 0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
  double s = 0;
  for (double x : v) s += std::pow(x, p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

TransferenceReport transference_check(const IntMatrix& a, const std::vector<Signal>& signals, long N, long L,
                                      const ExponentTuple& exponents) {
  check_signals(a, signals);
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  FiniteSystem sys(N);
  TransferenceReport rep;
  rep.system_size = N;
  rep.L = L;
  for (const auto& row : a) {
    long s = 0;
    for (long v : row) s += std::abs(v);
    rep.M = std::max(rep.M, s);
  }
  const Rational dual = exponents.dual();
  const double p_out = dual == 0 ? kInfinity : 1.0 / to_double(dual);
  const long reach = (rep.M + 1) * L;
  rep.kappa = std::isinf(p_out) ? 1.0
                                : std::pow(static_cast<double>(2 * reach + 1) / static_cast<double>(2 * L + 1), 1.0 / p_out);

  std::vector<std::vector<double>> periodic(signals.size(), std::vector<double>(static_cast<std::size_t>(N), 0.0));
  for (std::size_t i = 0; i < signals.size(); ++i)
    for (std::size_t t = 0; t < signals[i].values.size(); ++t)
      periodic[i][static_cast<std::size_t>(sys.shift(signals[i].start, static_cast<long>(t)))] += signals[i].values[t];

  auto orbit = [&](long x) {
    std::vector<Signal> phi;
    for (const auto& f : periodic) {
      Signal g{-reach, std::vector<double>(static_cast<std::size_t>(2 * reach + 1))};
      for (long l = -reach; l <= reach; ++l) g.values[static_cast<std::size_t>(l + reach)] = f[static_cast<std::size_t>(sys.shift(x, l))];
      phi.push_back(std::move(g));
    }
    return phi;
  };

  // T*_{X,L} on the whole system
  std::vector<double> finitary(static_cast<std::size_t>(N));
  parallel_for(finitary.size(), [&](std::size_t y) {
    finitary[y] = maximal_at(a, orbit(static_cast<long>(y)), 0, L).value;
  });
  std::vector<Signal> periodic_signals;
  for (const auto& f : periodic) periodic_signals.push_back(Signal{0, f});
  rep.ergodic_ratio = operator_ratio(Signal{0, finitary}, periodic_signals, exponents);

  std::vector<double> gaps(static_cast<std::size_t>(N)), rights(gaps.size()), ratios(gaps.size());
  parallel_for(gaps.size(), [&](std::size_t xi) {
    long x = static_cast<long>(xi);
    auto phi = orbit(x);
    std::vector<double> left, right;
    for (long l = -L; l <= L; ++l) {
      left.push_back(finitary[static_cast<std::size_t>(sys.shift(x, l))]);
      right.push_back(maximal_at(a, phi, l).value);
    }
    double lx = power_sum(left, p_out), rx = power_sum(right, p_out);
    gaps[xi] = lx - rx;
    rights[xi] = rx;
    EvaluationWindow w = evaluation_window(a, phi);
    w.lo = std::min(w.lo, -L);
    w.hi = std::max(w.hi, L);
    ratios[xi] = operator_ratio(maximal_operator(a, phi, w.lo, w.hi), phi, exponents);
  });
  rep.pointwise_gap = *std::max_element(gaps.begin(), gaps.end());
  rep.integer_ratio_max = *std::max_element(ratios.begin(), ratios.end());
  rep.sum_inequality_holds = true;
  for (std::size_t x = 0; x < gaps.size(); ++x)
    if (gaps[x] > 1e-12 * (1.0 + rights[x])) rep.sum_inequality_holds = false;
  rep.ratio_inequality_holds = rep.ergodic_ratio <= rep.kappa * rep.integer_ratio_max * (1 + 1e-12) + 1e-300;

  // original signals on Z, sup over N <= L; vanishes outside the reach of the supports
  auto t = trim_all(signals);
  if (!any_empty(t)) {
    long lo = t[0].start, hi = t[0].last();
    for (const auto& f : t) {
      lo = std::min(lo, f.start);
      hi = std::max(hi, f.last());
    }
    Signal z = maximal_operator(a, signals, lo - rep.M * L, hi + rep.M * L, L);
    rep.truncated_integer_ratio = operator_ratio(z, signals, exponents);
  }
  return rep;
}

}  // namespace maxavg
