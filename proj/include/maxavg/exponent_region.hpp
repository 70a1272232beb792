#pragma once

#include "maxavg/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace maxavg {

// (n-1) x m matrix of exact rationals.
struct AveragingMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  RationalMatrix entries;

  static AveragingMatrix make(RationalMatrix entries);
  std::size_t n() const { return rows + 1; }
};

// Tuple of reciprocals 1/p_i, each in [0, 1).
struct ExponentTuple {
  std::vector<Rational> reciprocals;

  static ExponentTuple make(std::vector<Rational> reciprocals);
  Rational dual() const;
  std::size_t size() const { return reciprocals.size(); }
};

using Vertex = std::vector<Rational>;

struct VertexSet {
  Rational epsilon;
  std::vector<Vertex> vertices;
};

enum class MembershipStatus { InsideWithWitness, NotFoundAtResolution };

struct MembershipVerdict {
  MembershipStatus status = MembershipStatus::NotFoundAtResolution;
  std::optional<Rational> witness_epsilon;
  std::vector<Vertex> support;      // vertices with positive weight
  std::vector<Rational> weights;    // parallel to support

  bool inside() const { return status == MembershipStatus::InsideWithWitness; }
};

// Appends a ones column and the row (0, ..., 0, 1).
RationalMatrix extend_matrix(const AveragingMatrix& a);

bool is_independence_set(const RationalMatrix& m, const std::vector<std::size_t>& rows);

// Largest r such that every r rows are linearly independent.
std::size_t nondegeneracy_rank(const RationalMatrix& m);

// n minus the nondegeneracy rank of the extended matrix.
std::size_t complexity(const AveragingMatrix& a);

// Component codes of a vertex: 0, 1/2 + eps, 1 - eps.
enum class VertexCode { Zero, Half, Full };
// The admissible code patterns do not depend on eps.
std::vector<std::vector<VertexCode>> vertex_patterns(const AveragingMatrix& a);
Vertex instantiate(const std::vector<VertexCode>& pattern, const Rational& eps);

VertexSet vertex_set(const AveragingMatrix& a, const Rational& eps);

MembershipVerdict hull_contains(const AveragingMatrix& a, const Rational& eps, const ExponentTuple& x);

// Searches eps = j / (4 * resolution), j = 1 .. resolution - 1, and reports the smallest
// eps whose hull contains x. A negative answer only means nothing was found on the grid.
MembershipVerdict region_contains(const AveragingMatrix& a, const ExponentTuple& x, std::size_t resolution = 1024);

// sum(x) < n - k - 1/2 with k = complexity(a).
bool corollary_region_contains(const AveragingMatrix& a, const ExponentTuple& x);
Rational corollary_threshold(const AveragingMatrix& a);

Rational dual_exponent(const ExponentTuple& x);

// Re-checks weights >= 0, sum = 1 and the convex combination, all exactly.
bool verify_certificate(const MembershipVerdict& v, const ExponentTuple& x);

}  // namespace maxavg
