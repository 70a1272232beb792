#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace maxavg {

using Rational = mpq_class;
using RationalMatrix = std::vector<std::vector<Rational>>;

// Accepts "p/q", "p", or a plain decimal such as "0.75".
Rational parse_rational(const std::string& text);
// num/den in lowest terms; mpq_class(num, den) alone does not canonicalise.
Rational frac(long num, long den);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
bool is_integer(const Rational& q);

std::size_t matrix_rank(RationalMatrix m);
// Rows are indices into m; an empty selection is independent.
bool rows_independent(const RationalMatrix& m, const std::vector<std::size_t>& rows);
// Inverse of a square nonsingular matrix; throws std::domain_error if singular.
RationalMatrix invert(RationalMatrix m);

}  // namespace maxavg
