#include "maxavg/tf/trees.hpp"

#include "maxavg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace maxavg::tf {

bool is_tree(const std::vector<Multitile>& s, const MultitileTree& tree) {
  if (tree.top >= s.size()) return false;
  const Multitile& top = s[tree.top];
  if (tree.index < 0 || tree.index >= static_cast<int>(top.n())) return false;
  for (std::size_t m : tree.members) {
    if (m >= s.size()) return false;
    if (!tile_le(s[m][tree.index], top[tree.index])) return false;
  }
  return true;
}

bool is_j_separated(const MultitileTree& tree, int j, const RankOneParams& params, int* eps) {
  return params.separates(tree.index, j, eps);
}

std::vector<std::string> tree_geometry_check(const std::vector<Multitile>& s, const MultitileTree& tree,
                                             const RankOneParams& params) {
  std::vector<std::string> out;
  if (!is_tree(s, tree)) out.push_back("not a tree: some member fails s_i <= T_i");
  const Multitile& top = s[tree.top];
  const auto& mem = tree.members;
  for (std::size_t a = 0; a < mem.size(); ++a) {
    for (std::size_t b = a + 1; b < mem.size(); ++b) {
      const Multitile& x = s[mem[a]];
      const Multitile& y = s[mem[b]];
      if (x.time().scale() == y.time().scale()) {
        for (std::size_t k = 0; k < x.n(); ++k)
          if (x[k].freq != y[k].freq) {
            out.push_back("(i) members " + std::to_string(mem[a]) + "," + std::to_string(mem[b]) +
                          " share a scale but differ in coordinate " + std::to_string(k));
            break;
          }
      }
      if (x.time() == y.time())
        out.push_back("(ii) members " + std::to_string(mem[a]) + "," + std::to_string(mem[b]) + " share a time interval");
    }
  }
  Rational lo = params.c_lo * params.C0, hi = params.c_hi * params.C0;
  for (int t = 0; t < 2; ++t) {
    int j = params.lacunary_index(tree.index, t);
    for (std::size_t m : mem) {
      if (s[m] == top) continue;
      Rational w = s[m][j].freq.length();
      Span a = s[m][j].freq.span().dilate(10), b = top[j].freq.span().dilate(10);
      Rational d = distance(a, b);
      if (closed_meet(a, b) || d < lo * w || d > hi * w)
        out.push_back("(iii) member " + std::to_string(m) + " coordinate " + std::to_string(j) + " at distance " +
                      to_string(d / w) + " widths from the top");
    }
  }
  return out;
}

TreeOrder::TreeOrder(const std::vector<Multitile>& s) : count_(s.size()) {
  std::size_t n = s.empty() ? 0 : s.front().n();
  std::vector<std::vector<Span>> w3(count_);
  for (std::size_t a = 0; a < count_; ++a) {
    if (s[a].n() != n) throw std::invalid_argument("multitiles of mixed arity");
    for (const auto& t : s[a].tiles) w3[a].push_back(t.dilated_freq(3));
    length_.push_back(to_double(s[a].time().length()));
  }
  le_.assign(n, std::vector<char>(count_ * count_, 0));
  within_.assign(count_ * count_, 0);
  parallel_for(count_, [&](std::size_t a) {
    for (std::size_t b = 0; b < count_; ++b) {
      bool inside = s[b].time().contains(s[a].time());
      within_[a * count_ + b] = inside;
      bool strict = inside && s[a].time() != s[b].time();
      for (std::size_t i = 0; i < n; ++i) {
        bool v;
        if (s[a][i] == s[b][i]) v = true;
        else if (!strict) v = false;
        else v = span_contains(w3[a][i], w3[b][i]) && (w3[a][i].lo != w3[b][i].lo || w3[a][i].hi != w3[b][i].hi);
        le_[i][a * count_ + b] = v;
      }
    }
  });
}

SizeValue tree_size(const TreeOrder& order, const CoefficientTable& coef, const std::vector<char>& alive,
                    const std::vector<char>& tops, int j, const RankOneParams& params) {
  SizeValue best;
  std::size_t count = order.size();
  int n = static_cast<int>(params.n());
  for (std::size_t t = 0; t < count; ++t) {
    if (!tops[t] && !alive[t]) continue;
    for (int i = 0; i < n; ++i) {
      if (!params.separates(i, j)) continue;
      double energy = 0;
      bool any = false;
      for (std::size_t s = 0; s < count; ++s) {
        if (!alive[s] || !order.le(i, s, t)) continue;
        energy += coef[s][j] * coef[s][j];
        any = true;
      }
      if (!any) continue;
      double v = std::sqrt(energy / order.length(t));
      if (!best.found || v > best.size) {
        best.size = v;
        best.found = true;
        best.top = t;
        best.index = i;
      }
    }
  }
  return best;
}

double tree_size_direct(const std::vector<Multitile>& s, const CoefficientTable& coef, const std::vector<char>& alive,
                        const std::vector<char>& tops, int j, const RankOneParams& params) {
  double best = 0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (!tops[t] && !alive[t]) continue;
    double len = to_double(s[t].time().length());
    for (int i = 0; i < static_cast<int>(params.n()); ++i) {
      if (!params.separates(i, j)) continue;
      double energy = 0;
      for (std::size_t m = 0; m < s.size(); ++m)
        if (alive[m] && tile_le(s[m][i], s[t][i])) energy += coef[m][j] * coef[m][j];
      best = std::max(best, std::sqrt(energy / len));
    }
  }
  return best;
}

SingleTreeBound single_tree_bound_check(const std::vector<Multitile>& s, const MultitileTree& tree,
                                        const CoefficientTable& coef, const RankOneParams& params) {
  if (!is_tree(s, tree)) throw std::invalid_argument("single tree bound needs a valid tree");
  std::size_t n = params.n();
  std::vector<char> alive(s.size(), 0), tops(s.size(), 0);
  for (std::size_t m : tree.members) alive[m] = 1;
  tops[tree.top] = 1;
  TreeOrder order(s);
  SingleTreeBound out;
  out.rhs = to_double(s[tree.top].time().length());
  for (std::size_t i = 0; i < n; ++i)
    out.rhs *= tree_size(order, coef, alive, tops, static_cast<int>(i), params).size;
  for (std::size_t m : tree.members) {
    double term = std::pow(to_double(s[m].time().length()), 1.0 - static_cast<double>(n) / 2.0);
    for (std::size_t i = 0; i < n; ++i) term *= coef[m][i];
    out.lhs += term;
  }
  return out;
}

bool strongly_disjoint(const std::vector<Multitile>& s, const MultitileTree& a, const MultitileTree& b, int j) {
  for (std::size_t x : a.members)
    for (std::size_t y : b.members)
      if (x == y || s[x] == s[y]) return false;
  auto one_way = [&](const MultitileTree& p, const MultitileTree& q) {
    const DyadicInterval& top_time = s[p.top].time();
    for (std::size_t x : p.members) {
      const Span& wx = s[x][j].freq.span();
      for (std::size_t y : q.members) {
        const Span& wy = s[y][j].freq.span();
        bool strict = span_contains(wy, wx) && (wx.lo != wy.lo || wx.hi != wy.hi);
        if (strict && top_time.overlaps(s[y].time())) return false;
      }
    }
    return true;
  };
  return one_way(a, b) && one_way(b, a);
}

int split_exponent(double size) {
  if (!(size > 0)) return -1075;
  int m = static_cast<int>(std::ceil(std::log2(size))) - 1;
  while (std::ldexp(1.0, m + 1) < size) ++m;
  while (std::ldexp(1.0, m) >= size) --m;
  return m;
}

namespace {

struct Candidate {
  std::size_t top;
  int index;
  int eps;
  Rational key;
  double size;
};

// Orientation of the selection key for trees of index i separated in j. The nesting argument needs the
// top with the longer time interval to come first; that is the side the rank-one sign for (j -> i)
// puts below, which matches eps only when c_i/c_j > 0.
int key_orientation(const RankOneParams& params, int i, int j, int eps) {
  int back = 0;
  if (params.separates(j, i, &back)) return -back;
  return eps;
}

bool better(const Candidate& c, const Candidate& best, const std::vector<Multitile>& s) {
  if (c.key != best.key) return c.key > best.key;
  const DyadicInterval& x = s[c.top].time();
  const DyadicInterval& y = s[best.top].time();
  if (x.scale() != y.scale()) return x.scale() < y.scale();
  if (x.pos() != y.pos()) return x.pos() < y.pos();
  return s[c.top] < s[best.top];
}

}  // namespace

SplitResult split_by_size(const std::vector<Multitile>& s, int j, int m, const CoefficientTable& coef,
                          const RankOneParams& params) {
  params.validate();
  if (coef.size() != s.size()) throw std::invalid_argument("coefficient table does not match the collection");
  std::size_t count = s.size();
  TreeOrder order(s);
  std::vector<char> alive(count, 1), tops(count, 1);
  SplitResult out;
  out.j = j;
  out.m = m;
  double upper = std::ldexp(1.0, m + 1), lower = std::ldexp(1.0, m);
  out.initial_size = tree_size(order, coef, alive, tops, j, params).size;
  if (out.initial_size > upper * (1 + 1e-12))
    throw std::invalid_argument("split precondition violated: size exceeds 2^(m+1)");
  double energy_floor = lower * lower, cap = upper * upper;
  std::size_t round = 0;

  while (true) {
    double current = tree_size(order, coef, alive, tops, j, params).size;
    out.final_size = current;
    if (current <= lower) break;
    int n = static_cast<int>(params.n());
    std::vector<Candidate> per_class(n);
    std::vector<char> has(n, 0);
    // each (i, eps) class is fixed by i once j is fixed
    std::vector<std::vector<Candidate>> found(count);
    parallel_for(count, [&](std::size_t t) {
      for (int i = 0; i < n; ++i) {
        int eps = 0;
        if (!params.separates(i, j, &eps)) continue;
        std::vector<std::size_t> mem;
        double energy = 0;
        for (std::size_t x = 0; x < count; ++x)
          if (alive[x] && order.le(i, x, t)) {
            mem.push_back(x);
            energy += coef[x][j] * coef[x][j];
          }
        if (mem.empty() || !(energy > energy_floor * order.length(t))) continue;
        bool fits = true;
        for (std::size_t tp : mem) {
          double local = 0;
          for (std::size_t x : mem)
            if (order.time_within(x, tp)) local += coef[x][j] * coef[x][j];
          if (local > cap * order.length(tp) * (1 + 1e-12)) {
            fits = false;
            break;
          }
        }
        if (!fits) continue;
        found[t].push_back({t, i, eps, key_orientation(params, i, j, eps) * s[t][i].freq.center(), std::sqrt(energy / order.length(t))});
      }
    });
    for (const auto& list : found)
      for (const auto& c : list) {
        if (!has[c.index] || better(c, per_class[c.index], s)) per_class[c.index] = c;
        has[c.index] = 1;
      }
    int pick = -1;
    for (int i = 0; i < n && pick < 0; ++i)
      if (has[i]) pick = i;
    if (pick < 0) throw std::runtime_error("no tree satisfies the selection constraints while size exceeds 2^m");
    const Candidate& c = per_class[pick];

    SelectedTree chosen;
    chosen.tree.top = c.top;
    chosen.tree.index = c.index;
    chosen.eps = c.eps;
    chosen.step = 3;
    chosen.size = c.size;
    chosen.key = c.key;
    chosen.order = round;
    for (std::size_t x = 0; x < count; ++x)
      if (alive[x] && order.le(c.index, x, c.top)) {
        chosen.tree.members.push_back(x);
        alive[x] = 0;
      }
    out.forest.push_back(chosen);

    SelectedTree companion;
    companion.tree.top = c.top;
    companion.tree.index = j;
    companion.step = 4;
    companion.key = c.key;
    companion.order = round;
    for (std::size_t x = 0; x < count; ++x)
      if (alive[x] && order.le(j, x, c.top)) {
        companion.tree.members.push_back(x);
        alive[x] = 0;
      }
    if (!companion.tree.members.empty()) out.forest.push_back(companion);
    ++round;
  }
  for (std::size_t x = 0; x < count; ++x)
    if (alive[x]) out.remainder.push_back(x);
  return out;
}

SplitAudit audit_split(const std::vector<Multitile>& s, const SplitResult& result, const CoefficientTable& coef,
                       const RankOneParams& params) {
  SplitAudit a;
  std::vector<int> seen(s.size(), 0);
  for (const auto& t : result.forest)
    for (std::size_t x : t.tree.members) ++seen[x];
  for (std::size_t x : result.remainder) ++seen[x];
  a.partition = std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; });
  if (!a.partition) a.problems.push_back("forest and remainder do not partition the collection");

  std::vector<char> alive(s.size(), 0), tops(s.size(), 1);
  for (std::size_t x : result.remainder) alive[x] = 1;
  a.remainder_size = tree_size_direct(s, coef, alive, tops, result.j, params);
  a.remainder_small = a.remainder_size <= std::ldexp(1.0, result.m) * (1 + 1e-12);
  if (!a.remainder_small) a.problems.push_back("remainder size above 2^m");

  std::map<std::pair<int, int>, std::vector<const SelectedTree*>> classes;
  for (const auto& t : result.forest)
    if (t.step == 3) classes[{t.tree.index, t.eps}].push_back(&t);
  a.disjoint = a.monotone = a.sign_condition = true;
  for (const auto& [key, list] : classes) {
    for (std::size_t u = 0; u + 1 < list.size(); ++u)
      if (list[u + 1]->key > list[u]->key) a.monotone = false;
    for (std::size_t u = 0; u < list.size(); ++u)
      for (std::size_t v = u + 1; v < list.size(); ++v) {
        const auto& p = *list[u];
        const auto& q = *list[v];
        if (!strongly_disjoint(s, p.tree, q.tree, result.j)) {
          a.disjoint = false;
          a.problems.push_back("trees " + std::to_string(u) + "," + std::to_string(v) + " of class (" +
                               std::to_string(key.first) + "," + std::to_string(key.second) + ") not strongly disjoint");
        }
        // nesting sign condition, both orientations
        for (int flip = 0; flip < 2; ++flip) {
          const SelectedTree& x = flip ? q : p;
          const SelectedTree& y = flip ? p : q;
          const Multitile& top = s[x.tree.top];
          for (std::size_t sm : x.tree.members)
            for (std::size_t sp : y.tree.members) {
              const Span& w = s[sm][result.j].freq.span();
              const Span& wp = s[sp][result.j].freq.span();
              bool strict = span_contains(wp, w) && (w.lo != wp.lo || w.hi != wp.hi);
              if (!strict || !top.time().overlaps(s[sp].time())) continue;
              const Span& ti = top[key.first].freq.span();
              const Span& tpi = s[y.tree.top][key.first].freq.span();
              bool side = key.second > 0 ? ti.lo > tpi.hi : ti.hi < tpi.lo;
              if (!tile_lt(s[sp][result.j], top[result.j]) || !side) a.sign_condition = false;
            }
        }
      }
  }
  if (!a.monotone) a.problems.push_back("selection keys increase within a class");
  if (!a.sign_condition) a.problems.push_back("nesting sign condition fails");
  return a;
}

}  // namespace maxavg::tf
