#pragma once

#include "maxavg/rational.hpp"

#include <string>
#include <utility>

namespace maxavg::tf {

// 2^e exactly, e may be negative.
Rational pow2(long e);

// Closed real interval with exact endpoints (used for dilates and distances).
struct Span {
  Rational lo, hi;
  Rational length() const { return hi - lo; }
  Rational center() const { return (lo + hi) / 2; }
  Span dilate(const Rational& c) const;
};

// Closed-set intersection, so touching endpoints count.
bool closed_meet(const Span& a, const Span& b);
// Gap between two intervals, 0 when they meet.
Rational distance(const Span& a, const Span& b);
bool span_contains(const Span& outer, const Span& inner);

// Interval of grid d in {0,1,2}, length 2^-scale, left end 2^-scale (pos + s_d (-1)^scale / 3),
// s_0 = 0, s_1 = +1, s_2 = -1.
class DyadicInterval {
 public:
  DyadicInterval() = default;
  DyadicInterval(int grid, long scale, mpz_class pos);

  int grid() const { return grid_; }
  long scale() const { return scale_; }
  const mpz_class& pos() const { return pos_; }
  const Rational& lo() const { return span_.lo; }
  const Rational& hi() const { return span_.hi; }
  const Span& span() const { return span_; }
  Rational length() const { return span_.hi - span_.lo; }
  Rational center() const { return span_.center(); }

  DyadicInterval parent() const;
  std::pair<DyadicInterval, DyadicInterval> children() const;
  DyadicInterval ancestor(long scale) const;  // scale <= this->scale()

  // Sets are half-open for intersection, so neighbours sharing an endpoint are disjoint.
  bool contains(const DyadicInterval& o) const { return span_contains(span_, o.span_); }
  bool strictly_contains(const DyadicInterval& o) const { return contains(o) && !(*this == o); }
  bool overlaps(const DyadicInterval& o) const { return span_.lo < o.span_.hi && o.span_.lo < span_.hi; }

  bool operator==(const DyadicInterval& o) const {
    return grid_ == o.grid_ && scale_ == o.scale_ && pos_ == o.pos_;
  }
  bool operator!=(const DyadicInterval& o) const { return !(*this == o); }
  // grid, then scale, then position
  bool operator<(const DyadicInterval& o) const;

  std::string describe() const;

 private:
  int grid_ = 0;
  long scale_ = 0;
  mpz_class pos_ = 0;
  Span span_{0, 1};
};

DyadicInterval grid_interval(int grid, long scale, const mpz_class& pos);
// The unique grid interval of the given scale whose half-open span holds x.
DyadicInterval interval_containing(int grid, long scale, const Rational& x);

int grid_shift(int grid);  // s_d

}  // namespace maxavg::tf
