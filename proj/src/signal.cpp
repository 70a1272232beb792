#include "maxavg/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxavg {

bool Signal::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

Signal Signal::trimmed() const {
  std::size_t a = 0, b = values.size();
  while (a < b && values[a] == 0.0) ++a;
  while (b > a && values[b - 1] == 0.0) --b;
  if (a == b) return Signal{0, {}};
  return Signal{start + static_cast<long>(a), std::vector<double>(values.begin() + a, values.begin() + b)};
}

Signal Signal::constant(long lo, long hi, double value) {
  if (hi < lo) throw std::invalid_argument("empty constant window");
  return Signal{lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1), value)};
}

double lp_norm(const Signal& f, double p) {
  if (!(p > 0)) throw std::invalid_argument("lp_norm needs p > 0");
  if (std::isinf(p)) {
    double m = 0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0;
  for (double v : f.values) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

double weak_lp(const Signal& f, double p) {
  if (!(p > 0)) throw std::invalid_argument("weak_lp needs p > 0");
  if (std::isinf(p)) return lp_norm(f, p);
  std::vector<double> mags;
  for (double v : f.values)
    if (v != 0.0) mags.push_back(std::abs(v));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  // sup over lambda just below each magnitude: v * #{|f| >= v}^(1/p)
  double best = 0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    std::size_t count = k + 1;
    while (count < mags.size() && mags[count] == mags[k]) ++count;
    best = std::max(best, mags[k] * std::pow(static_cast<double>(count), 1.0 / p));
  }
  return best;
}

Signal hl_maximal(const Signal& f, long lo, long hi) {
  if (hi < lo) throw std::invalid_argument("empty window");
  Signal out{lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0)};
  Signal g = f.trimmed();
  if (g.empty()) return out;
  std::vector<double> prefix(g.values.size() + 1, 0.0);
  for (std::size_t t = 0; t < g.values.size(); ++t) prefix[t + 1] = prefix[t] + std::abs(g.values[t]);
  auto window_sum = [&](long a, long b) {
    long s = std::max(a, g.start), e = std::min(b, g.last());
    if (e < s) return 0.0;
    return prefix[static_cast<std::size_t>(e - g.start + 1)] - prefix[static_cast<std::size_t>(s - g.start)];
  };
  for (long x = lo; x <= hi; ++x) {
    // Beyond this radius the sum is frozen and the average only shrinks.
    long reach = std::max({1L, std::abs(x - g.start), std::abs(g.last() - x)});
    double best = 0;
    for (long n = 1; n <= reach; ++n) best = std::max(best, window_sum(x - n, x + n) / static_cast<double>(2 * n + 1));
    out.values[static_cast<std::size_t>(x - lo)] = best;
  }
  return out;
}

}  // namespace maxavg
