#include <doctest.h>

#include "maxavg/tf/instances.hpp"

#include <cmath>
#include <set>

using namespace maxavg;
using namespace maxavg::tf;

namespace {

std::vector<char> all_of(std::size_t n) { return std::vector<char>(n, 1); }

}  // namespace

TEST_CASE("singleton trees") {
  SampledTree st = sampled_tree(1, 10);
  MultitileTree one{{0}, 0, 0};
  CHECK(is_tree(st.tiles, one));
  CHECK(tree_geometry_check(st.tiles, one, st.params).empty());
  SingleTreeBound b = single_tree_bound_check(st.tiles, one, st.coef, st.params);
  CHECK(b.holds());
}

TEST_CASE("trees in a rank-one collection satisfy the tree geometry properties") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    SplitInstance si = split_instance(seed, 200);
    for (const auto& t : si.result.forest) {
      CHECK(is_tree(si.instance.tiles, t.tree));
      CHECK(tree_geometry_check(si.instance.tiles, t.tree, si.instance.params).empty());
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("duplicated time interval breaks the tree geometry properties") {
  SampledTree st = sampled_tree(2, 12);
  REQUIRE(st.tree.members.size() > 2);
  std::size_t src = st.tree.members[1];
  Multitile copy = st.tiles[src];
  // same time interval, a different frequency in a lacunary coordinate
  for (std::size_t k = 1; k < copy.n(); ++k) {
    const auto& f = copy.tiles[k].freq;
    copy.tiles[k] = Tile::make(copy.time(), DyadicInterval(f.grid(), f.scale(), f.pos() + 7));
  }
  st.tiles.push_back(copy);
  st.tree.members.push_back(st.tiles.size() - 1);
  REQUIRE(is_tree(st.tiles, st.tree));
  auto problems = tree_geometry_check(st.tiles, st.tree, st.params);
  bool shared = false;
  for (const auto& p : problems) shared = shared || p.rfind("(ii)", 0) == 0;
  CHECK(shared);
}

TEST_CASE("size") {
  SampledTree st = sampled_tree(3, 15);
  TreeOrder order(st.tiles);
  auto alive = all_of(st.tiles.size());
  // a singleton collection: |<f, phi>| / |I|^{1/2}
  std::vector<char> only(st.tiles.size(), 0);
  only[4] = 1;
  SizeValue single = tree_size(order, st.coef, only, only, 1, st.params);
  CHECK(single.size == doctest::Approx(st.coef[4][1] / std::sqrt(order.length(4))));

  CoefficientTable zero(st.coef.size(), std::vector<double>(3, 0.0));
  CHECK(tree_size(order, zero, alive, alive, 1, st.params).size == 0);

  // monotone in the collection, and equal to the direct computation
  for (int j = 0; j < 3; ++j) {
    double full = tree_size(order, st.coef, alive, alive, j, st.params).size;
    CHECK(full == doctest::Approx(tree_size_direct(st.tiles, st.coef, alive, alive, j, st.params)));
    std::vector<char> half = alive;
    for (std::size_t k = 0; k < half.size(); k += 2) half[k] = 0;
    CHECK(tree_size(order, st.coef, half, half, j, st.params).size <= full);
  }
}

TEST_CASE("single tree bound") {
  SampledTree st = sampled_tree(4, 20);
  CoefficientTable zero(st.coef.size(), std::vector<double>(3, 0.0));
  SingleTreeBound z = single_tree_bound_check(st.tiles, st.tree, zero, st.params);
  CHECK(z.lhs == 0);
  CHECK(z.rhs == 0);

  MultitileTree one{{3}, 3, 0};
  SingleTreeBound s = single_tree_bound_check(st.tiles, one, st.coef, st.params);
  CHECK(s.lhs == doctest::Approx(s.rhs).epsilon(1e-12));

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SampledTree t = sampled_tree(seed, 20);
    SingleTreeBound b = single_tree_bound_check(t.tiles, t.tree, t.coef, t.params);
    CHECK(b.lhs <= b.rhs * (1 + 1e-9));
  }
}

TEST_CASE("split exponent") {
  CHECK(split_exponent(1.0) == -1);
  CHECK(split_exponent(1.5) == 0);
  CHECK(split_exponent(2.0) == 0);
  CHECK(split_exponent(2.5) == 1);
  for (double s : {0.01, 0.3, 7.0, 1e5}) {
    int m = split_exponent(s);
    CHECK(s <= std::ldexp(1.0, m + 1));
    CHECK(s > std::ldexp(1.0, m));
  }
}

TEST_CASE("strong disjointness") {
  DyadicInterval t0(0, 0, 0), t1(0, 0, 5);
  auto mt = [](const DyadicInterval& t, long f) {
    return Multitile::make({Tile::make(t, DyadicInterval(0, -t.scale(), f)),
                            Tile::make(t, DyadicInterval(0, -t.scale(), f + 10)),
                            Tile::make(t, DyadicInterval(0, -t.scale(), f + 20))});
  };
  std::vector<Multitile> s{mt(t0, 0), mt(t1, 0)};
  MultitileTree a{{0}, 0, 0}, b{{1}, 1, 0};
  CHECK(strongly_disjoint(s, a, b, 1));

  // b gains a coarser-frequency tile meeting I_T of a
  DyadicInterval fine(0, 1, 0);
  Multitile inner = Multitile::make({Tile::make(fine, DyadicInterval(0, -1, 0)),
                                     Tile::make(fine, DyadicInterval(0, -1, 5)),
                                     Tile::make(fine, DyadicInterval(0, -1, 10))});
  s.push_back(inner);
  MultitileTree c{{2}, 2, 0};
  CHECK_FALSE(strongly_disjoint(s, a, c, 1));
  CHECK_FALSE(strongly_disjoint(s, a, a, 1));
}

TEST_CASE("size splitting") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    SplitInstance si = split_instance(seed, 200);
    INFO("seed " << seed);
    CHECK(si.audit.ok());
    CHECK(si.result.final_size <= std::ldexp(1.0, si.m) * (1 + 1e-12));

    // partition: every multitile exactly once
    std::vector<int> seen(si.instance.tiles.size(), 0);
    for (const auto& t : si.result.forest)
      for (auto k : t.tree.members) ++seen[k];
    for (auto k : si.result.remainder) ++seen[k];
    for (int c : seen) CHECK(c == 1);

    // pairwise strong disjointness inside each (index, sign) class of selected trees
    for (std::size_t x = 0; x < si.result.forest.size(); ++x)
      for (std::size_t y = x + 1; y < si.result.forest.size(); ++y) {
        const auto& p = si.result.forest[x];
        const auto& q = si.result.forest[y];
        if (p.step != 3 || q.step != 3 || p.tree.index != q.tree.index || p.eps != q.eps) continue;
        CHECK(strongly_disjoint(si.instance.tiles, p.tree, q.tree, si.j));
      }
  }
}

TEST_CASE("split with a large exponent does nothing") {
  SplitInstance si = split_instance(5, 120);
  SplitResult r = split_by_size(si.instance.tiles, si.j, si.m + 1, si.coef, si.instance.params);
  CHECK(r.forest.empty());
  CHECK(r.remainder.size() == si.instance.tiles.size());
}

TEST_CASE("iterating the split layers the collection") {
  SplitInstance si = split_instance(6, 200);
  std::vector<Multitile> rest;
  CoefficientTable coef;
  for (auto k : si.result.remainder) {
    rest.push_back(si.instance.tiles[k]);
    coef.push_back(si.coef[k]);
  }
  if (!rest.empty()) {
    SplitResult next = split_by_size(rest, si.j, si.m - 1, coef, si.instance.params);
    SplitAudit audit = audit_split(rest, next, coef, si.instance.params);
    CHECK(audit.partition);
    CHECK(audit.remainder_small);
    CHECK(audit.disjoint);
  }
}
