#include <doctest.h>

#include "maxavg/random.hpp"
#include "maxavg/tf/instances.hpp"
#include "maxavg/tf/rank_one.hpp"

using namespace maxavg;
using namespace maxavg::tf;

namespace {

DyadicInterval random_interval(Rng& rng, int grid) {
  long scale = rng.integer(-3, 4);
  return DyadicInterval(grid, scale, rng.integer(-20, 20));
}

Tile random_tile(Rng& rng) {
  long scale = rng.integer(-1, 3);
  return Tile::make(DyadicInterval(0, scale, rng.integer(-4, 4)),
                    DyadicInterval(static_cast<int>(rng.integer(0, 2)), -scale, rng.integer(-4, 4)));
}

}  // namespace

TEST_CASE("dyadic intervals on the three grids") {
  DyadicInterval a(0, 0, 5);
  CHECK(a.lo() == 5);
  CHECK(a.hi() == 6);
  DyadicInterval b(1, 0, 0);
  CHECK(b.lo() == frac(1, 3));
  CHECK(b.hi() == frac(4, 3));
  CHECK(b.length() == 1);
  CHECK(b.parent().contains(b));
  auto [l, r] = b.children();
  CHECK(b.contains(l));
  CHECK(b.contains(r));
  CHECK(l.hi() == r.lo());
  CHECK(pow2(-3) == frac(1, 8));
  CHECK(pow2(4) == 16);
  CHECK(grid_shift(0) == 0);
  CHECK(grid_shift(1) == 1);
  CHECK(grid_shift(2) == -1);
}

TEST_CASE("same-grid intervals are nested or disjoint") {
  Rng rng(31);
  for (int t = 0; t < 400; ++t) {
    int g = static_cast<int>(rng.integer(0, 2));
    DyadicInterval a = random_interval(rng, g), b = random_interval(rng, g);
    if (a.overlaps(b)) CHECK((a.contains(b) || b.contains(a)));
    if (a.scale() >= b.scale() && a.overlaps(b)) CHECK(a.ancestor(b.scale()) == b);
  }
}

TEST_CASE("interval_containing") {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    int g = static_cast<int>(rng.integer(0, 2));
    long scale = rng.integer(-3, 5);
    Rational x = frac(rng.integer(-1000, 1000), 97);
    DyadicInterval i = interval_containing(g, scale, x);
    CHECK(i.grid() == g);
    CHECK(i.scale() == scale);
    CHECK(i.lo() <= x);
    CHECK(x < i.hi());
  }
}

TEST_CASE("tiles obey the Heisenberg relation") {
  Tile p = Tile::make(DyadicInterval(0, 1, 0), DyadicInterval(0, -1, 0));
  CHECK(p.time.length() * p.freq.length() == 1);
  CHECK_THROWS(Tile::make(DyadicInterval(0, 1, 0), DyadicInterval(0, 0, 0)));
  CHECK_THROWS(Tile::make(DyadicInterval(1, 0, 0), DyadicInterval(0, 0, 0)));
}

TEST_CASE("tile order") {
  // [0,1/2) x [0,2) below [0,1) x [0,1): the 3-dilates are [-2,4) and [-1,2)
  Tile p = Tile::make(DyadicInterval(0, 1, 0), DyadicInterval(0, -1, 0));
  Tile q = Tile::make(DyadicInterval(0, 0, 0), DyadicInterval(0, 0, 0));
  CHECK(tile_lt(p, q));
  CHECK_FALSE(tile_lt(q, p));
  CHECK_FALSE(tile_lt(p, p));
  CHECK(tile_le(p, p));

  Rng rng(17);
  std::vector<Tile> tiles;
  for (int t = 0; t < 40; ++t) tiles.push_back(random_tile(rng));
  for (const auto& a : tiles)
    for (const auto& b : tiles) {
      if (tile_le(a, b) && tile_le(b, a)) CHECK(a == b);
      if (!tile_le(a, b)) continue;
      for (const auto& c : tiles)
        if (tile_le(b, c)) CHECK(tile_le(a, c));
    }
}

TEST_CASE("third frequency tiles") {
  for (long l = -6; l <= 6; ++l) {
    DyadicInterval w = third_frequency(2, l);
    CHECK(w.length() == frac(1, 4));
    CHECK(w.lo() == frac(l, 12));
  }
}

TEST_CASE("multitiles share one time interval") {
  DyadicInterval t(0, 0, 0);
  Multitile m = Multitile::make({Tile::make(t, DyadicInterval(0, 0, 1)), Tile::make(t, DyadicInterval(1, 0, 4))});
  CHECK(m.n() == 2);
  CHECK(m.time() == t);
  CHECK_THROWS(Multitile::make({Tile::make(t, DyadicInterval(0, 0, 1)),
                                Tile::make(DyadicInterval(0, 0, 1), DyadicInterval(0, 0, 1))}));
}

TEST_CASE("rank-one generator and checker") {
  LawAssessment law = assess_law(default_law(), 32, 42);
  CHECK(law.slack > 0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    GeneratorOptions o;
    o.count = 200;
    o.seed = seed;
    RankOneInstance a = generate_rank_one(default_law(), 32, 42, o);
    CHECK(a.tiles.size() == 200);
    CHECK(rank_one_check(a.tiles, a.params).empty());
    RankOneInstance b = generate_rank_one(default_law(), 32, 42, o);
    CHECK(a.tiles == b.tiles);
  }
  GeneratorOptions one;
  one.count = 1;
  RankOneInstance single = generate_rank_one(default_law(), 32, 42, one);
  CHECK(single.tiles.size() == 1);
  CHECK(rank_one_check(single.tiles, single.params).empty());
}

TEST_CASE("rank-one counterexamples") {
  RankOneParams params = assess_law(default_law(), 32, 42).params;
  auto mt = [](long scale, long pos, std::vector<long> freqs) {
    DyadicInterval t(0, scale, pos);
    std::vector<Tile> ts;
    for (long f : freqs) ts.push_back(Tile::make(t, DyadicInterval(0, -scale, f)));
    return Multitile::make(ts);
  };
  // frequency widths 1 and 2: far below 2^C1 apart
  std::vector<Multitile> s{mt(0, 0, {0, 100, 200}), mt(1, 0, {0, 50, 100})};
  auto v = rank_one_check(s, params);
  REQUIRE_FALSE(v.empty());
  bool separation = false;
  for (const auto& x : v) separation = separation || x.bullet == RankOneBullet::ScaleSeparation;
  CHECK(separation);
  CHECK(rank_one_check({s[0]}, params).empty());
}
