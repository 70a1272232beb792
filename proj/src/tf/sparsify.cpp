#include "maxavg/tf/sparsify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace maxavg::tf {

namespace {

long mod(long x, long m) { return ((x % m) + m) % m; }

long mod(const mpz_class& x, long m) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(m));
  return r.get_si();
}

}  // namespace

bool is_a_enlargement(const DyadicInterval& interval, long a, const DyadicInterval& candidate) {
  Span inner = interval.span().dilate(a), outer = interval.span().dilate(3 * a);
  return span_contains(candidate.span(), inner) && span_contains(outer, candidate.span());
}

Rational enlargement_dilation(const DyadicInterval& interval, long a, const DyadicInterval& candidate) {
  Span inner = interval.span().dilate(a);
  Rational c = inner.center();
  Rational reach = std::max(c - candidate.lo(), candidate.hi() - c);
  return 2 * reach / inner.length();
}

namespace {

// Grid intervals of length between A|I| and limit·A|I| containing A·I, shortest first, then grid.
std::vector<DyadicInterval> covers(const DyadicInterval& interval, long a, long limit) {
  if (a < 1) throw std::invalid_argument("a_enlargement: A must be at least 1");
  Span inner = interval.span().dilate(a);
  Rational want = inner.length();
  long scale = interval.scale();
  while (pow2(-scale) < want) --scale;
  std::vector<DyadicInterval> out;
  for (long s = scale; pow2(-s) <= limit * want; --s)
    for (int d = 0; d < 3; ++d) {
      DyadicInterval j = interval_containing(d, s, inner.lo);
      if (span_contains(j.span(), inner)) out.push_back(j);
    }
  return out;
}

}  // namespace

bool has_regular_enlargement(const DyadicInterval& interval, long a) {
  for (const auto& j : covers(interval, a, 3))
    if (is_a_enlargement(interval, a, j)) return true;
  return false;
}

DyadicInterval a_enlargement(const DyadicInterval& interval, long a) {
  std::vector<DyadicInterval> all = covers(interval, a, 8);
  for (const auto& j : all)
    if (is_a_enlargement(interval, a, j)) return j;
  if (all.empty()) throw std::logic_error("a_enlargement: no grid interval covers " + interval.describe());
  std::size_t best = 0;
  Rational best_c = enlargement_dilation(interval, a, all[0]);
  for (std::size_t k = 1; k < all.size(); ++k) {
    Rational c = enlargement_dilation(interval, a, all[k]);
    if (c < best_c) {
      best_c = c;
      best = k;
    }
  }
  return all[best];
}

std::size_t sparsify_family_bound(long a) { return static_cast<std::size_t>(3 * 100 * a * (100 * a + 1)); }

std::vector<SparseFamily> sparsify(const std::vector<DyadicInterval>& intervals, long a) {
  if (a < 1) throw std::invalid_argument("sparsify: A must be at least 1");
  std::map<std::tuple<long, long, int>, std::vector<std::size_t>> classes;
  std::map<DyadicInterval, std::tuple<long, long, int>> seen;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const auto& i = intervals[k];
    if (i.grid() != 0) throw std::invalid_argument("sparsify: time intervals must lie on grid 0");
    auto it = seen.find(i);
    if (it == seen.end()) {
      int d = a_enlargement(i, a).grid();
      it = seen.emplace(i, std::make_tuple(mod(i.scale(), 100 * a), mod(i.pos(), 100 * a + 1), d)).first;
    }
    classes[it->second].push_back(k);
  }
  std::vector<SparseFamily> out;
  for (auto& [key, members] : classes) out.push_back({std::get<2>(key), std::move(members)});
  return out;
}

std::vector<std::string> sparse_check(const std::vector<DyadicInterval>& intervals, const SparseFamily& family,
                                      long a) {
  std::vector<std::string> out;
  std::set<DyadicInterval> distinct;
  for (std::size_t k : family.members) distinct.insert(intervals[k]);
  std::vector<DyadicInterval> v(distinct.begin(), distinct.end());
  for (std::size_t x = 0; x < v.size(); ++x) {
    bool found = false;
    for (const auto& j : covers(v[x], a, 3))
      if (j.grid() == family.grid && is_a_enlargement(v[x], a, j)) found = true;
    if (!found) out.push_back("(iii) " + v[x].describe() + " has no enlargement in grid " + std::to_string(family.grid));
    for (std::size_t y = x + 1; y < v.size(); ++y) {
      const auto& p = v[x];
      const auto& q = v[y];
      if (p.scale() != q.scale()) {
        long gap = std::abs(p.scale() - q.scale());
        if (gap < 100 * a) out.push_back("(i) " + p.describe() + " and " + q.describe() + " too close in scale");
      } else if (distance(p.span(), q.span()) < 100 * a * p.length()) {
        out.push_back("(ii) " + p.describe() + " and " + q.describe() + " too close");
      }
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> layer_intervals(const std::vector<DyadicInterval>& intervals) {
  std::vector<std::vector<std::size_t>> layers;
  std::vector<char> done(intervals.size(), 0);
  std::size_t left = intervals.size();
  while (left > 0) {
    std::vector<std::size_t> layer;
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      if (done[k]) continue;
      bool maximal = true;
      for (std::size_t o = 0; o < intervals.size() && maximal; ++o)
        if (!done[o] && o != k && intervals[o].strictly_contains(intervals[k])) maximal = false;
      if (maximal) layer.push_back(k);
    }
    for (std::size_t k : layer) done[k] = 1;
    left -= layer.size();
    layers.push_back(std::move(layer));
  }
  return layers;
}

std::vector<std::string> layer_check(const std::vector<DyadicInterval>& intervals,
                                     const std::vector<std::vector<std::size_t>>& layers) {
  std::vector<std::string> out;
  std::vector<int> count(intervals.size(), 0);
  for (std::size_t j = 0; j < layers.size(); ++j) {
    for (std::size_t x = 0; x < layers[j].size(); ++x) {
      std::size_t k = layers[j][x];
      if (k >= intervals.size()) {
        out.push_back("index out of range");
        continue;
      }
      ++count[k];
      for (std::size_t y = x + 1; y < layers[j].size(); ++y)
        if (intervals[k].overlaps(intervals[layers[j][y]]))
          out.push_back("layer " + std::to_string(j + 1) + " not disjoint");
      if (j > 0) {
        int parents = 0;
        for (std::size_t p : layers[j - 1])
          if (intervals[p].contains(intervals[k])) ++parents;
        if (parents != 1)
          out.push_back("interval " + intervals[k].describe() + " lies in " + std::to_string(parents) +
                        " intervals of the previous layer");
      }
    }
  }
  for (std::size_t k = 0; k < intervals.size(); ++k)
    if (count[k] != 1) out.push_back("interval " + std::to_string(k) + " assigned " + std::to_string(count[k]) + " times");
  return out;
}

std::vector<SparseForest> sparse_subforests(const Forest& forest, long a) {
  std::vector<DyadicInterval> times;
  for (const auto& t : forest.pool) times.push_back(t.time);
  std::vector<SparseFamily> families = sparsify(times, a);
  std::vector<SparseForest> out;
  for (const auto& family : families) {
    std::set<std::size_t> in(family.members.begin(), family.members.end());
    SparseForest sf;
    sf.grid = family.grid;
    for (const auto& tree : forest.trees) {
      std::vector<std::size_t> kept;
      for (std::size_t p : tree.tiles)
        if (in.count(p)) kept.push_back(p);
      for (std::size_t p : kept) {
        const DyadicInterval& i = forest.pool[p].time;
        bool maximal = true;
        for (std::size_t q : kept)
          if (forest.pool[q].time.strictly_contains(i)) maximal = false;
        if (!maximal) continue;
        LacunaryTree sub{{}, i, tree.xi};
        for (std::size_t q : kept)
          if (i.contains(forest.pool[q].time)) sub.tiles.push_back(q);
        sf.trees.push_back(std::move(sub));
      }
    }
    out.push_back(std::move(sf));
  }
  return out;
}

bool TileLayering::partition_ok() const {
  for (std::size_t k = 0; k < tiles.size(); ++k)
    if (exact[k].size() + below[k].size() != 1) return false;
  return true;
}

TileLayering layer_tiles(const std::vector<Tile>& pool, const SparseForest& forest, long a) {
  TileLayering out;
  std::map<DyadicInterval, std::size_t> index;
  for (const auto& t : forest.trees)
    if (index.emplace(t.interval, out.intervals.size()).second) out.intervals.push_back(t.interval);
  for (const auto& i : out.intervals) out.enlarged.push_back(a_enlargement(i, a));
  out.layers = layer_intervals(out.enlarged);
  std::vector<std::size_t> layer_of(out.intervals.size());
  for (std::size_t j = 0; j < out.layers.size(); ++j)
    for (std::size_t k : out.layers[j]) layer_of[k] = j;
  std::set<std::size_t> tiles;
  for (const auto& t : forest.trees) tiles.insert(t.tiles.begin(), t.tiles.end());
  out.tiles.assign(tiles.begin(), tiles.end());
  for (std::size_t p : out.tiles) {
    const DyadicInterval& ip = pool[p].time;
    std::vector<std::size_t> ex, be;
    for (std::size_t k = 0; k < out.intervals.size(); ++k) {
      const DyadicInterval& i = out.intervals[k];
      if (ip == i) {
        ex.push_back(k);
      } else if (i.strictly_contains(ip)) {
        bool later = false;
        for (std::size_t o = 0; o < out.intervals.size() && !later; ++o)
          if (layer_of[o] > layer_of[k] && out.intervals[o].contains(ip)) later = true;
        if (!later) be.push_back(k);
      }
    }
    out.exact.push_back(std::move(ex));
    out.below.push_back(std::move(be));
  }
  return out;
}

}  // namespace maxavg::tf
