#include "maxavg/tf/forest.hpp"

#include "maxavg/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace maxavg::tf {

std::vector<std::string> lacunary_tree_check(const std::vector<Tile>& pool, const LacunaryTree& tree,
                                             const LacunaryParams& params) {
  std::vector<std::string> out;
  if (tree.interval.grid() != 0) out.push_back("tree interval not on grid 0");
  Span centre{tree.xi, tree.xi};
  std::map<long, const Tile*> by_scale;
  for (std::size_t p : tree.tiles) {
    if (p >= pool.size()) {
      out.push_back("tile index " + std::to_string(p) + " out of range");
      continue;
    }
    const Tile& t = pool[p];
    if (!tree.interval.contains(t.time))
      out.push_back("tile " + std::to_string(p) + " leaves the tree interval");
    Rational w = t.freq.length();
    Rational d = distance(t.freq.span(), centre);
    if (d < params.c_lo * params.C0 * w || d > params.c_hi * params.C0 * w)
      out.push_back("tile " + std::to_string(p) + " at distance " + to_string(d / w) + " widths from the centre");
    auto [it, fresh] = by_scale.emplace(t.time.scale(), &t);
    if (!fresh) {
      if (it->second->freq != t.freq)
        out.push_back("two frequencies at scale " + std::to_string(t.time.scale()));
      else if (it->second->time == t.time)
        out.push_back("repeated time interval " + t.time.describe());
    }
  }
  return out;
}

namespace {

bool one_way(const std::vector<Tile>& pool, const LacunaryTree& a, const LacunaryTree& b) {
  for (std::size_t p : a.tiles)
    for (std::size_t q : b.tiles) {
      const Tile& x = pool[p];
      const Tile& y = pool[q];
      if (y.freq.strictly_contains(x.freq) && a.interval.overlaps(y.time)) return false;
    }
  return true;
}

}  // namespace

bool strongly_disjoint(const std::vector<Tile>& pool, const LacunaryTree& a, const LacunaryTree& b) {
  std::set<Tile> seen;
  for (std::size_t p : a.tiles) seen.insert(pool[p]);
  for (std::size_t q : b.tiles)
    if (seen.count(pool[q])) return false;
  return one_way(pool, a, b) && one_way(pool, b, a);
}

std::vector<std::string> forest_check(const Forest& forest) {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < forest.trees.size(); ++t)
    for (auto& msg : lacunary_tree_check(forest.pool, forest.trees[t], forest.params))
      out.push_back("tree " + std::to_string(t) + ": " + msg);
  for (std::size_t a = 0; a < forest.trees.size(); ++a)
    for (std::size_t b = a + 1; b < forest.trees.size(); ++b)
      if (!strongly_disjoint(forest.pool, forest.trees[a], forest.trees[b]))
        out.push_back("trees " + std::to_string(a) + "," + std::to_string(b) + " not strongly disjoint");
  return out;
}

Forest generate_forest(const ForestOptions& options, const LacunaryParams& params) {
  Forest forest;
  forest.params = params;
  Rng rng(derive_seed(options.seed, "forest"));
  Rational lo = params.c_lo * params.C0, hi = params.c_hi * params.C0;
  long dmin = static_cast<long>(std::ceil(to_double(lo))) + 1;
  long dmax = static_cast<long>(std::floor(to_double(hi))) - 2;
  for (std::size_t attempt = 0; attempt < options.attempts && forest.trees.size() < options.trees; ++attempt) {
    long scale = rng.integer(options.coarsest_tree_scale, options.finest_tree_scale);
    long slots = 1L << (options.span_log2 + scale);
    DyadicInterval top(0, scale, rng.integer(0, slots - 1));
    LacunaryTree tree{{}, top, Rational(rng.integer(-2 * options.xi_range, 2 * options.xi_range), 2)};
    tree.xi.canonicalize();
    int side = rng.sign();
    std::vector<Tile> tiles;
    for (long i = scale; i <= options.finest_tile_scale; ++i) {
      if (!rng.coin(options.scale_fill)) continue;
      Rational w = pow2(i);
      long d = rng.integer(dmin, dmax);
      Rational target = tree.xi + side * (Rational(d) + Rational(1, 2)) * w;
      DyadicInterval freq = interval_containing(0, -i, target);
      Rational gap = distance(freq.span(), Span{tree.xi, tree.xi});
      if (gap < lo * w || gap > hi * w) continue;
      long count = 1L << (i - scale);
      std::vector<long> positions;
      for (long k = 0; k < count; ++k) positions.push_back(k);
      for (std::size_t k = positions.size(); k > 1; --k)
        std::swap(positions[k - 1], positions[rng.integer(0, static_cast<long>(k) - 1)]);
      std::size_t take = std::min<std::size_t>(positions.size(), rng.integer(1, options.per_scale));
      for (std::size_t k = 0; k < take; ++k) {
        mpz_class pos = top.pos() * mpz_class(count) + positions[k];
        tiles.push_back(Tile::make(DyadicInterval(0, i, pos), freq));
      }
    }
    if (tiles.empty()) continue;
    std::sort(tiles.begin(), tiles.end());
    std::vector<Tile> pool = forest.pool;
    for (auto& t : tiles) {
      tree.tiles.push_back(pool.size());
      pool.push_back(t);
    }
    bool ok = true;
    for (const auto& other : forest.trees)
      if (!strongly_disjoint(pool, tree, other)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    forest.pool = std::move(pool);
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

Rational StepFunction::l1() const {
  Rational s = 0;
  for (std::size_t c = 0; c < values.size(); ++c) s += values[c] * (breaks[c + 1] - breaks[c]);
  return s;
}

long StepFunction::sup() const {
  long s = 0;
  for (long v : values) s = std::max(s, v);
  return s;
}

StepFunction counting_function(const std::vector<DyadicInterval>& intervals) {
  StepFunction f;
  for (const auto& i : intervals) {
    f.breaks.push_back(i.lo());
    f.breaks.push_back(i.hi());
  }
  std::sort(f.breaks.begin(), f.breaks.end());
  f.breaks.erase(std::unique(f.breaks.begin(), f.breaks.end()), f.breaks.end());
  if (f.breaks.size() < 2) {
    f.breaks.clear();
    return f;
  }
  f.values.assign(f.breaks.size() - 1, 0);
  for (const auto& i : intervals) {
    auto a = std::lower_bound(f.breaks.begin(), f.breaks.end(), i.lo()) - f.breaks.begin();
    auto b = std::lower_bound(f.breaks.begin(), f.breaks.end(), i.hi()) - f.breaks.begin();
    for (auto c = a; c < b; ++c) ++f.values[c];
  }
  return f;
}

namespace {

std::vector<DyadicInterval> tree_intervals(const Forest& forest) {
  std::vector<DyadicInterval> out;
  for (const auto& t : forest.trees) out.push_back(t.interval);
  return out;
}

long value_at(const StepFunction& f, const Rational& x) {
  if (f.breaks.empty() || x < f.breaks.front() || x >= f.breaks.back()) return 0;
  auto c = std::upper_bound(f.breaks.begin(), f.breaks.end(), x) - f.breaks.begin() - 1;
  return f.values[c];
}

}  // namespace

StepFunction counting_function(const Forest& forest) { return counting_function(tree_intervals(forest)); }

bool dominated(const StepFunction& f, const StepFunction& g) {
  for (std::size_t c = 0; c < f.values.size(); ++c)
    if (f.values[c] > value_at(g, f.breaks[c])) return false;
  return true;
}

BmoValue forest_bmo(const std::vector<DyadicInterval>& intervals) {
  BmoValue best{0, DyadicInterval()};
  if (intervals.empty()) return best;
  Rational lo = intervals.front().lo(), hi = intervals.front().hi();
  for (const auto& i : intervals) {
    lo = std::min(lo, i.lo());
    hi = std::max(hi, i.hi());
  }
  Rational cap = 2 * (hi - lo);
  std::set<DyadicInterval> candidates;
  for (const auto& i : intervals) {
    DyadicInterval j = i;
    while (true) {
      if (!candidates.insert(j).second) break;  // ancestors already visited
      if (j.length() >= cap) break;
      j = j.parent();
    }
  }
  for (const auto& j : candidates) {
    Rational mass = 0;
    for (const auto& i : intervals)
      if (j.contains(i)) mass += i.length();
    Rational v = mass / j.length();
    if (v > best.value) best = {v, j};
  }
  return best;
}

BmoValue forest_bmo(const Forest& forest) { return forest_bmo(tree_intervals(forest)); }

std::vector<DyadicInterval> heavy_intervals(const std::vector<DyadicInterval>& intervals, const DyadicInterval& i0,
                                            long threshold) {
  if (threshold < 0) throw std::invalid_argument("heavy_intervals: threshold must be nonnegative");
  std::vector<DyadicInterval> inside;
  long finest = i0.scale();
  for (const auto& i : intervals)
    if (i0.contains(i)) {
      inside.push_back(i);
      finest = std::max(finest, i.scale());
    }
  std::vector<DyadicInterval> out;
  std::vector<DyadicInterval> stack{i0};
  while (!stack.empty()) {
    DyadicInterval j = stack.back();
    stack.pop_back();
    long count = 0;
    for (const auto& i : inside)
      if (i.contains(j)) ++count;
    if (count > threshold) {
      out.push_back(j);
      continue;
    }
    if (j.scale() >= finest) continue;
    // a subinterval can only gain intervals that meet it
    bool any = false;
    for (const auto& i : inside)
      if (i.overlaps(j) && i.scale() > j.scale()) any = true;
    if (!any) continue;
    auto [a, b] = j.children();
    stack.push_back(b);
    stack.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Dyadic intervals inside the tree interval that are minimal for their tile set.
std::set<DyadicInterval> carleson_candidates(const std::vector<Tile>& pool, const LacunaryTree& tree) {
  std::set<DyadicInterval> out{tree.interval};
  for (std::size_t p : tree.tiles) {
    DyadicInterval j = pool[p].time;
    while (j.scale() > tree.interval.scale()) {
      if (!out.insert(j).second) break;
      j = j.parent();
    }
  }
  return out;
}

double mass_in(const std::vector<Tile>& pool, const LacunaryTree& tree, const std::vector<double>& energy,
               const DyadicInterval& i) {
  double s = 0;
  for (std::size_t p : tree.tiles)
    if (i.contains(pool[p].time)) s += energy[p];
  return s;
}

}  // namespace

double carleson_ratio(const std::vector<Tile>& pool, const LacunaryTree& tree, const std::vector<double>& energy,
                      DyadicInterval* witness) {
  double best = 0;
  for (const auto& i : carleson_candidates(pool, tree)) {
    double r = mass_in(pool, tree, energy, i) / to_double(i.length());
    if (r > best) {
      best = r;
      if (witness) *witness = i;
    }
  }
  return best;
}

double StoppingResult::sumest_ratio() const {
  if (heavy.empty()) return 0;
  return heavy_mass / (std::ldexp(1.0, 2 * level) * to_double(heavy_length));
}

StoppingResult stopping_time(const std::vector<Tile>& pool, const std::vector<LacunaryTree>& trees,
                             const std::vector<double>& energy, int m) {
  if (energy.size() != pool.size()) throw std::invalid_argument("stopping_time: one energy per pool tile");
  const double bound = std::ldexp(1.0, 2 * m);
  const double lower = std::ldexp(1.0, 2 * (m - 1));
  StoppingResult out;
  for (const auto& tree : trees) {
    DyadicInterval w;
    if (carleson_ratio(pool, tree, energy, &w) > bound * (1 + 1e-12))
      throw std::domain_error("stopping_time: Carleson condition fails at " + w.describe());
    std::vector<DyadicInterval> heavy;
    for (const auto& i : carleson_candidates(pool, tree))
      if (mass_in(pool, tree, energy, i) > lower * to_double(i.length())) heavy.push_back(i);
    std::vector<DyadicInterval> maximal;
    for (const auto& i : heavy) {
      bool top = true;
      for (const auto& k : heavy)
        if (k.strictly_contains(i)) {
          top = false;
          break;
        }
      if (top) maximal.push_back(i);
    }
    std::vector<char> taken(tree.tiles.size(), 0);
    for (const auto& i : maximal) {
      LacunaryTree sub{{}, i, tree.xi};
      for (std::size_t k = 0; k < tree.tiles.size(); ++k)
        if (i.contains(pool[tree.tiles[k]].time)) {
          sub.tiles.push_back(tree.tiles[k]);
          taken[k] = 1;
          out.heavy_mass += energy[tree.tiles[k]];
        }
      out.heavy_length += i.length();
      out.heavy.push_back(std::move(sub));
    }
    LacunaryTree rest{{}, tree.interval, tree.xi};
    for (std::size_t k = 0; k < tree.tiles.size(); ++k)
      if (!taken[k]) rest.tiles.push_back(tree.tiles[k]);
    if (!rest.tiles.empty()) out.light.push_back(std::move(rest));
  }
  out.level = m;
  return out;
}

IteratedStopping iterated_stopping(const std::vector<Tile>& pool, const std::vector<LacunaryTree>& trees,
                                   const std::vector<double>& energy) {
  IteratedStopping out;
  std::vector<LacunaryTree> current;
  for (const auto& tree : trees) {
    LacunaryTree live{{}, tree.interval, tree.xi};
    for (std::size_t p : tree.tiles) {
      out.total_energy += energy[p];
      if (energy[p] > 0)
        live.tiles.push_back(p);
      else
        out.zero_set.push_back(p);
    }
    if (!live.tiles.empty()) current.push_back(std::move(live));
  }
  if (current.empty()) return out;
  double worst = 0;
  for (const auto& tree : current) worst = std::max(worst, carleson_ratio(pool, tree, energy));
  int m = static_cast<int>(std::ceil(std::log2(worst) / 2));
  while (m > -1000 && std::ldexp(1.0, 2 * (m - 1)) >= worst) --m;
  while (std::ldexp(1.0, 2 * m) < worst) ++m;
  out.top = m;
  double weighted = 0;
  while (!current.empty()) {
    StoppingResult step = stopping_time(pool, current, energy, m);
    if (!step.heavy.empty()) {
      out.levels.push_back(m);
      weighted += std::ldexp(1.0, 2 * m) * to_double(step.heavy_length);
      out.layers.push_back(std::move(step.heavy));
    }
    current = std::move(step.light);
    --m;
  }
  out.msum_ratio = out.total_energy > 0 ? weighted / out.total_energy : 0;
  return out;
}

bool stopping_partition_ok(const std::vector<LacunaryTree>& trees, const IteratedStopping& result) {
  std::multiset<std::size_t> want, got;
  for (const auto& t : trees) want.insert(t.tiles.begin(), t.tiles.end());
  for (const auto& layer : result.layers)
    for (const auto& t : layer) got.insert(t.tiles.begin(), t.tiles.end());
  got.insert(result.zero_set.begin(), result.zero_set.end());
  if (want != got) return false;
  for (std::size_t p : want)
    if (want.count(p) != 1) return false;
  return true;
}

}  // namespace maxavg::tf
