#include "maxavg/tf/tiles.hpp"

#include <stdexcept>

namespace maxavg::tf {

Tile Tile::make(DyadicInterval time, DyadicInterval freq) {
  if (time.grid() != 0) throw std::invalid_argument("tile time interval must lie on grid 0");
  if (time.scale() != -freq.scale()) throw std::invalid_argument("tile violates |I|*|w| = 1");
  return Tile{std::move(time), std::move(freq)};
}

bool Tile::operator<(const Tile& o) const {
  if (time != o.time) return time < o.time;
  return freq < o.freq;
}

bool tile_lt(const Tile& p, const Tile& q) {
  if (!q.time.strictly_contains(p.time)) return false;
  Span a = p.dilated_freq(3), b = q.dilated_freq(3);
  return span_contains(a, b) && (a.lo != b.lo || a.hi != b.hi);
}

bool tile_le(const Tile& p, const Tile& q) { return p == q || tile_lt(p, q); }

Multitile Multitile::make(std::vector<Tile> tiles) {
  if (tiles.empty()) throw std::invalid_argument("multitile needs at least one tile");
  for (const auto& t : tiles)
    if (t.time != tiles.front().time) throw std::invalid_argument("multitile components must share the time interval");
  return Multitile{std::move(tiles)};
}

bool Multitile::operator<(const Multitile& o) const {
  if (tiles.size() != o.tiles.size()) return tiles.size() < o.tiles.size();
  for (std::size_t j = 0; j < tiles.size(); ++j)
    if (tiles[j] != o.tiles[j]) return tiles[j] < o.tiles[j];
  return false;
}

DyadicInterval third_frequency(long k, const mpz_class& l) {
  // l/3 = L + s (-1)^k / 3 with s the grid shift
  mpz_class r = l % 3;
  if (r < 0) r += 3;
  int sign = (k % 2 == 0) ? 1 : -1;
  int s = 0;
  if (r == 1) s = sign;
  else if (r == 2) s = -sign;
  int grid = s == 0 ? 0 : (s == 1 ? 1 : 2);
  mpz_class big_l = (l - s * sign) / 3;
  return DyadicInterval(grid, k, big_l);
}

}  // namespace maxavg::tf
