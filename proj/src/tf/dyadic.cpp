#include "maxavg/tf/dyadic.hpp"

#include <stdexcept>

namespace maxavg::tf {

Rational pow2(long e) {
  mpz_class p = 1;
  if (e >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return Rational(mpz_class(1), p);
}

Span Span::dilate(const Rational& c) const {
  Rational mid = center(), half = length() * c / 2;
  return {mid - half, mid + half};
}

bool closed_meet(const Span& a, const Span& b) { return a.lo <= b.hi && b.lo <= a.hi; }

Rational distance(const Span& a, const Span& b) {
  if (a.hi < b.lo) return b.lo - a.hi;
  if (b.hi < a.lo) return a.lo - b.hi;
  return 0;
}

bool span_contains(const Span& outer, const Span& inner) { return outer.lo <= inner.lo && inner.hi <= outer.hi; }

int grid_shift(int grid) {
  switch (grid) {
    case 0: return 0;
    case 1: return 1;
    case 2: return -1;
  }
  throw std::invalid_argument("grid id must be 0, 1 or 2");
}

namespace {

int parity_sign(long scale) { return (scale % 2 == 0) ? 1 : -1; }

}  // namespace

DyadicInterval::DyadicInterval(int grid, long scale, mpz_class pos) : grid_(grid), scale_(scale), pos_(std::move(pos)) {
  Rational offset = frac(grid_shift(grid) * parity_sign(scale), 3);
  Rational len = pow2(-scale);
  span_.lo = len * (Rational(pos_) + offset);
  span_.hi = span_.lo + len;
}

DyadicInterval DyadicInterval::parent() const {
  mpz_class num = pos_ + grid_shift(grid_) * parity_sign(scale_);
  mpz_class p;
  mpz_fdiv_q_2exp(p.get_mpz_t(), num.get_mpz_t(), 1);
  return DyadicInterval(grid_, scale_ - 1, p);
}

std::pair<DyadicInterval, DyadicInterval> DyadicInterval::children() const {
  mpz_class first = 2 * pos_ - grid_shift(grid_) * parity_sign(scale_ + 1);
  return {DyadicInterval(grid_, scale_ + 1, first), DyadicInterval(grid_, scale_ + 1, first + 1)};
}

DyadicInterval DyadicInterval::ancestor(long scale) const {
  if (scale > scale_) throw std::invalid_argument("ancestor scale must not exceed the interval scale");
  DyadicInterval cur = *this;
  while (cur.scale_ > scale) cur = cur.parent();
  return cur;
}

bool DyadicInterval::operator<(const DyadicInterval& o) const {
  if (grid_ != o.grid_) return grid_ < o.grid_;
  if (scale_ != o.scale_) return scale_ < o.scale_;
  return pos_ < o.pos_;
}

std::string DyadicInterval::describe() const {
  return "D" + std::to_string(grid_) + "[" + to_string(span_.lo) + ", " + to_string(span_.hi) + "]";
}

DyadicInterval grid_interval(int grid, long scale, const mpz_class& pos) { return DyadicInterval(grid, scale, pos); }

DyadicInterval interval_containing(int grid, long scale, const Rational& x) {
  Rational offset = frac(grid_shift(grid) * parity_sign(scale), 3);
  Rational t = x / pow2(-scale) - offset;
  mpz_class pos;
  mpz_fdiv_q(pos.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  return DyadicInterval(grid, scale, pos);
}

}  // namespace maxavg::tf
