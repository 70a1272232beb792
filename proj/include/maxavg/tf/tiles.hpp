#pragma once

#include "maxavg/tf/dyadic.hpp"

#include <cstddef>
#include <vector>

namespace maxavg::tf {

// Time interval on grid 0, frequency interval on any grid, |I|·|ω| = 1.
struct Tile {
  DyadicInterval time;
  DyadicInterval freq;

  static Tile make(DyadicInterval time, DyadicInterval freq);
  Span dilated_freq(const Rational& c) const { return freq.span().dilate(c); }
  bool operator==(const Tile& o) const { return time == o.time && freq == o.freq; }
  bool operator!=(const Tile& o) const { return !(*this == o); }
  bool operator<(const Tile& o) const;
};

// I_P strictly inside I_P' and 3ω_P strictly containing 3ω_P'.
bool tile_lt(const Tile& p, const Tile& q);
bool tile_le(const Tile& p, const Tile& q);

// n tiles sharing one time interval.
struct Multitile {
  std::vector<Tile> tiles;

  static Multitile make(std::vector<Tile> tiles);
  const DyadicInterval& time() const { return tiles.front().time; }
  std::size_t n() const { return tiles.size(); }
  const Tile& operator[](std::size_t j) const { return tiles[j]; }
  bool operator==(const Multitile& o) const { return tiles == o.tiles; }
  bool operator<(const Multitile& o) const;
};

// Frequency tile with time length 2^k and frequency 2^-k [l/3, l/3 + 1]; grid chosen from l mod 3.
DyadicInterval third_frequency(long k, const mpz_class& l);

}  // namespace maxavg::tf
