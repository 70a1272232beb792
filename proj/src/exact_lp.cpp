#include "maxavg/exact_lp.hpp"

#include <stdexcept>

namespace maxavg {

std::optional<std::vector<Rational>> convex_weights(const std::vector<std::vector<Rational>>& points,
                                                    const std::vector<Rational>& target) {
  const std::size_t p = points.size();
  const std::size_t d = target.size();
  if (p == 0) return std::nullopt;
  for (const auto& v : points)
    if (v.size() != d) throw std::invalid_argument("convex_weights: dimension mismatch");

  // Rows: d coordinate equations plus the normalization row.
  const std::size_t rows = d + 1;
  const std::size_t cols = p + rows;  // structural + artificial
  std::vector<std::vector<Rational>> t(rows, std::vector<Rational>(cols + 1, 0));
  for (std::size_t r = 0; r < rows; ++r) {
    Rational rhs = r < d ? target[r] : Rational(1);
    int sign = rhs < 0 ? -1 : 1;
    for (std::size_t v = 0; v < p; ++v) t[r][v] = sign * (r < d ? points[v][r] : Rational(1));
    t[r][p + r] = 1;
    t[r][cols] = sign * rhs;
  }
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) basis[r] = p + r;

  // Objective: minimize the sum of artificials; reduced costs z_j = -sum of rows.
  std::vector<Rational> cost(cols + 1, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c <= cols; ++c)
      if (c < p || c == cols) cost[c] -= t[r][c];

  while (true) {
    std::size_t enter = cols;
    for (std::size_t c = 0; c < cols; ++c)
      if (cost[c] < 0) {
        enter = c;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = rows;
    Rational best;
    for (std::size_t r = 0; r < rows; ++r) {
      if (t[r][enter] <= 0) continue;
      Rational ratio = t[r][cols] / t[r][enter];
      if (leave == rows || ratio < best || (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == rows) break;  // unbounded direction cannot occur in phase one
    Rational piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave || t[r][enter] == 0) continue;
      Rational f = t[r][enter];
      for (std::size_t c = 0; c <= cols; ++c) t[r][c] -= f * t[leave][c];
    }
    if (cost[enter] != 0) {
      Rational f = cost[enter];
      for (std::size_t c = 0; c <= cols; ++c) cost[c] -= f * t[leave][c];
    }
    basis[leave] = enter;
  }

  if (cost[cols] != 0) return std::nullopt;  // positive infeasibility remains
  std::vector<Rational> lambda(p, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < p) {
      lambda[basis[r]] = t[r][cols];
    } else if (t[r][cols] != 0) {
      return std::nullopt;
    }
  }
  return lambda;
}

}  // namespace maxavg
