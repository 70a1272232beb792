#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace maxavg {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Finitely supported sequence on Z; values[t] sits at index start + t.
struct Signal {
  long start = 0;
  std::vector<double> values;

  double at(long index) const {
    long t = index - start;
    if (t < 0 || t >= static_cast<long>(values.size())) return 0.0;
    return values[static_cast<std::size_t>(t)];
  }
  long last() const { return start + static_cast<long>(values.size()) - 1; }
  bool empty() const { return values.empty(); }
  bool is_zero() const;
  // Smallest window holding every nonzero value; empty signal if none.
  Signal trimmed() const;
  Signal shifted(long t) const { return Signal{start + t, values}; }

  static Signal delta(long at, double value = 1.0) { return Signal{at, {value}}; }
  static Signal constant(long lo, long hi, double value);
};

// Counting-measure norms; p = kInfinity gives the sup norm.
double lp_norm(const Signal& f, double p);
double weak_lp(const Signal& f, double p);

// sup over N >= 1 of (2N+1)^-1 sum_{|t| <= N} |f(x+t)|, for x in [lo, hi].
Signal hl_maximal(const Signal& f, long lo, long hi);

}  // namespace maxavg
