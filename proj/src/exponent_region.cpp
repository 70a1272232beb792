#include "maxavg/exponent_region.hpp"

#include "maxavg/exact_lp.hpp"
#include "maxavg/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace maxavg {

AveragingMatrix AveragingMatrix::make(RationalMatrix entries) {
  if (entries.empty() || entries[0].empty()) throw std::invalid_argument("averaging matrix needs rows >= 1 and cols >= 1");
  std::size_t cols = entries[0].size();
  for (const auto& r : entries)
    if (r.size() != cols) throw std::invalid_argument("averaging matrix rows have unequal length");
  AveragingMatrix a;
  a.rows = entries.size();
  a.cols = cols;
  a.entries = std::move(entries);
  return a;
}

ExponentTuple ExponentTuple::make(std::vector<Rational> reciprocals) {
  for (const auto& x : reciprocals)
    if (x < 0 || x >= 1) throw std::invalid_argument("exponent reciprocal " + to_string(x) + " outside [0, 1)");
  return ExponentTuple{std::move(reciprocals)};
}

Rational ExponentTuple::dual() const {
  Rational s = 0;
  for (const auto& x : reciprocals) s += x;
  return s;
}

RationalMatrix extend_matrix(const AveragingMatrix& a) {
  RationalMatrix e;
  e.reserve(a.rows + 1);
  for (const auto& row : a.entries) {
    auto r = row;
    r.push_back(1);
    e.push_back(std::move(r));
  }
  std::vector<Rational> last(a.cols + 1, 0);
  last.back() = 1;
  e.push_back(std::move(last));
  return e;
}

bool is_independence_set(const RationalMatrix& m, const std::vector<std::size_t>& rows) {
  return rows_independent(m, rows);
}

namespace {

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

bool all_subsets_independent(const RationalMatrix& m, std::size_t r) {
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  do {
    if (!rows_independent(m, idx)) return false;
  } while (next_combination(idx, m.size()));
  return true;
}

}  // namespace

std::size_t nondegeneracy_rank(const RationalMatrix& m) {
  if (m.empty()) return 0;
  std::size_t limit = std::min(m.size(), m[0].size());
  std::size_t r = 0;
  while (r < limit && all_subsets_independent(m, r + 1)) ++r;
  return r;
}

std::size_t complexity(const AveragingMatrix& a) { return a.n() - nondegeneracy_rank(extend_matrix(a)); }

std::vector<std::vector<VertexCode>> vertex_patterns(const AveragingMatrix& a) {
  const RationalMatrix e = extend_matrix(a);
  const std::size_t d = a.rows;
  std::vector<std::vector<VertexCode>> out;
  std::vector<int> code(d, 0);
  while (true) {
    std::vector<std::size_t> full, nonzero;
    int halves = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (code[i] == 1) ++halves;
      if (code[i] == 2) full.push_back(i);
      if (code[i] != 0) nonzero.push_back(i);
    }
    if (halves <= 1 && rows_independent(a.entries, full) && rows_independent(e, nonzero)) {
      std::vector<VertexCode> p(d);
      for (std::size_t i = 0; i < d; ++i) p[i] = static_cast<VertexCode>(code[i]);
      out.push_back(std::move(p));
    }
    std::size_t pos = 0;
    while (pos < d && code[pos] == 2) code[pos++] = 0;
    if (pos == d) break;
    ++code[pos];
  }
  return out;
}

Vertex instantiate(const std::vector<VertexCode>& pattern, const Rational& eps) {
  Vertex v(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    switch (pattern[i]) {
      case VertexCode::Zero: v[i] = 0; break;
      case VertexCode::Half: v[i] = Rational(1, 2) + eps; break;
      case VertexCode::Full: v[i] = 1 - eps; break;
    }
  }
  return v;
}

namespace {

void check_epsilon(const Rational& eps) {
  if (eps <= 0 || eps >= Rational(1, 4)) throw std::invalid_argument("epsilon must lie in (0, 1/4)");
}

void check_dimension(const AveragingMatrix& a, const ExponentTuple& x) {
  if (x.size() != a.rows) throw std::invalid_argument("exponent tuple has wrong dimension");
}

MembershipVerdict decide(const std::vector<Vertex>& verts, const Rational& eps, const ExponentTuple& x) {
  MembershipVerdict out;
  const std::size_t d = x.size();
  // Cheap exact necessary conditions before the simplex.
  for (std::size_t i = 0; i < d; ++i)
    if (x.reciprocals[i] > 1 - eps) return out;
  Rational sum = x.dual(), best = 0;
  for (const auto& v : verts) {
    Rational s = 0;
    for (const auto& c : v) s += c;
    if (s > best) best = s;
  }
  if (sum > best) return out;
  auto w = convex_weights(verts, x.reciprocals);
  if (!w) return out;
  out.status = MembershipStatus::InsideWithWitness;
  out.witness_epsilon = eps;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    if ((*w)[k] == 0) continue;
    out.support.push_back(verts[k]);
    out.weights.push_back((*w)[k]);
  }
  return out;
}

}  // namespace

VertexSet vertex_set(const AveragingMatrix& a, const Rational& eps) {
  check_epsilon(eps);
  VertexSet vs;
  vs.epsilon = eps;
  for (const auto& p : vertex_patterns(a)) vs.vertices.push_back(instantiate(p, eps));
  return vs;
}

MembershipVerdict hull_contains(const AveragingMatrix& a, const Rational& eps, const ExponentTuple& x) {
  check_epsilon(eps);
  check_dimension(a, x);
  return decide(vertex_set(a, eps).vertices, eps, x);
}

MembershipVerdict region_contains(const AveragingMatrix& a, const ExponentTuple& x, std::size_t resolution) {
  if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  check_dimension(a, x);
  const auto patterns = vertex_patterns(a);
  Rational top = 0;
  for (const auto& xi : x.reciprocals) top = std::max(top, xi);
  const Rational denom = 4 * static_cast<unsigned long>(resolution);
  // Coordinates above 1 - eps are never covered, so eps beyond 1 - max x is skipped.
  Rational jmax_q = (1 - top) * denom;
  mpz_class jmax_z = jmax_q.get_num() / jmax_q.get_den();
  std::size_t jmax = resolution - 1;
  if (jmax_z < static_cast<unsigned long>(jmax)) jmax = jmax_z.get_ui();

  const std::size_t chunk = std::max<std::size_t>(1, worker_count()) * 4;
  for (std::size_t base = 1; base <= jmax; base += chunk) {
    std::size_t count = std::min(chunk, jmax - base + 1);
    std::vector<MembershipVerdict> results(count);
    parallel_for(count, [&](std::size_t k) {
      Rational eps(static_cast<unsigned long>(base + k), 1);
      eps /= denom;
      std::vector<Vertex> verts;
      verts.reserve(patterns.size());
      for (const auto& p : patterns) verts.push_back(instantiate(p, eps));
      results[k] = decide(verts, eps, x);
    });
    for (auto& r : results)
      if (r.inside()) return r;
  }
  return MembershipVerdict{};
}

Rational corollary_threshold(const AveragingMatrix& a) {
  return Rational(static_cast<long>(a.n())) - Rational(static_cast<long>(complexity(a))) - Rational(1, 2);
}

bool corollary_region_contains(const AveragingMatrix& a, const ExponentTuple& x) {
  check_dimension(a, x);
  return x.dual() < corollary_threshold(a);
}

Rational dual_exponent(const ExponentTuple& x) { return x.dual(); }

bool verify_certificate(const MembershipVerdict& v, const ExponentTuple& x) {
  if (!v.inside() || v.support.size() != v.weights.size() || v.support.empty()) return false;
  Rational total = 0;
  std::vector<Rational> acc(x.size(), 0);
  for (std::size_t k = 0; k < v.support.size(); ++k) {
    if (v.weights[k] < 0 || v.support[k].size() != x.size()) return false;
    total += v.weights[k];
    for (std::size_t i = 0; i < x.size(); ++i) acc[i] += v.weights[k] * v.support[k][i];
  }
  return total == 1 && acc == x.reciprocals;
}

}  // namespace maxavg
