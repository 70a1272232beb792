#include "maxavg/tf/instances.hpp"

#include "maxavg/random.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace maxavg::tf {

FrequencyLaw default_law() { return FrequencyLaw{{1, -2, 1}, {0, 117, 60}}; }

CoefficientTable synthetic_coefficients(const std::vector<Multitile>& s, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "coefficients"));
  CoefficientTable out(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    double root = std::sqrt(to_double(s[a].time().length()));
    for (std::size_t k = 0; k < s[a].n(); ++k) out[a].push_back(root * rng.uniform());
  }
  return out;
}

SplitInstance split_instance(std::uint64_t seed, std::size_t count) {
  SplitInstance out;
  GeneratorOptions options;
  options.count = count;
  options.seed = seed;
  out.instance = generate_rank_one(default_law(), 32, 42, options);
  const auto& s = out.instance.tiles;
  out.coef = synthetic_coefficients(s, seed);
  out.j = static_cast<int>(seed % 3);
  TreeOrder order(s);
  std::vector<char> all(s.size(), 1);
  out.m = split_exponent(tree_size(order, out.coef, all, all, out.j, out.instance.params).size);
  out.result = split_by_size(s, out.j, out.m, out.coef, out.instance.params);
  out.audit = audit_split(s, out.result, out.coef, out.instance.params);
  return out;
}

namespace {

// Same spacing, window stretched to cover [lo, hi].
SampleGrid cover(SampleGrid g, double lo, double hi) {
  double end = std::max(g.x0 + g.period(), hi);
  g.x0 = std::min(g.x0, lo);
  std::size_t n = 1;
  while (static_cast<double>(n) * g.h < end - g.x0) n <<= 1;
  g.count = n;
  return g;
}

DyadicInterval random_frequency(Rng& rng, long time_scale, double reach) {
  long span = std::max(1L, static_cast<long>(reach / std::ldexp(1.0, static_cast<int>(time_scale))));
  return DyadicInterval(0, -time_scale, rng.integer(-span, span));
}

}  // namespace

SampledTree sampled_tree(std::uint64_t seed, std::size_t members) {
  SampledTree out;
  Rng rng(derive_seed(seed, "sampled-tree"));
  out.params = assess_law(default_law(), 32, 42).params;
  const std::size_t n = 3;
  std::vector<Tile> top;
  for (std::size_t k = 0; k < n; ++k)
    top.push_back(Tile::make(DyadicInterval(0, 0, 0), DyadicInterval(0, 0, rng.integer(-30, 30))));
  std::set<Multitile> seen;
  out.tiles.push_back(Multitile::make(top));
  seen.insert(out.tiles.back());
  out.tree.index = 0;
  out.tree.top = 0;
  out.tree.members.push_back(0);
  for (std::size_t tries = 0; out.tiles.size() <= members && tries < 50 * members; ++tries) {
    long scale = rng.integer(1, 4);
    DyadicInterval time(0, scale, rng.integer(0, (1L << scale) - 1));
    std::vector<Tile> tiles;
    for (std::size_t k = 0; k < n; ++k) {
      DyadicInterval freq = k == 0 ? top[0].freq.ancestor(-scale) : random_frequency(rng, scale, 100);
      tiles.push_back(Tile::make(time, freq));
    }
    Multitile m = Multitile::make(tiles);
    if (!seen.insert(m).second) continue;
    out.tree.members.push_back(out.tiles.size());
    out.tiles.push_back(m);
  }
  std::vector<Tile> flat;
  for (const auto& m : out.tiles) flat.insert(flat.end(), m.tiles.begin(), m.tiles.end());
  SampleGrid grid = choose_grid(flat);
  out.coef.assign(out.tiles.size(), std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    SampledFunction f = band_limited_noise(grid, -140, 140, rng);
    std::vector<Spectrum> packets;
    for (const auto& m : out.tiles) packets.push_back(packet_spectrum(m[k], grid));
    auto c = packet_coefficients(f, packets);
    for (std::size_t a = 0; a < out.tiles.size(); ++a) out.coef[a][k] = std::abs(c[a]);
  }
  return out;
}

SizeCase size_case(std::uint64_t seed, std::size_t count) {
  SizeCase out;
  Rng rng(derive_seed(seed, "size-case"));
  out.params = assess_law(default_law(), 32, 42).params;
  out.j = static_cast<int>(rng.integer(0, 2));
  std::set<Multitile> seen;
  for (std::size_t tries = 0; out.tiles.size() < count && tries < 50 * count; ++tries) {
    long scale = rng.integer(0, 3);
    DyadicInterval time(0, scale, rng.integer(0, (4L << scale) - 1));
    std::vector<Tile> tiles;
    for (int k = 0; k < 3; ++k) tiles.push_back(Tile::make(time, random_frequency(rng, scale, 64)));
    Multitile m = Multitile::make(tiles);
    if (seen.insert(m).second) out.tiles.push_back(m);
  }
  std::vector<std::pair<double, double>> parts;
  for (int k = 0; k < 3; ++k) {
    double a = -1 + 5 * rng.uniform(), len = 0.1 + 1.4 * rng.uniform();
    parts.push_back({a, a + len});
  }
  std::sort(parts.begin(), parts.end());
  for (const auto& p : parts) {
    if (!out.e.parts.empty() && p.first <= out.e.parts.back().second)
      out.e.parts.back().second = std::max(out.e.parts.back().second, p.second);
    else
      out.e.parts.push_back(p);
  }
  std::vector<Tile> flat;
  for (const auto& m : out.tiles) flat.push_back(m[out.j]);
  SampleGrid grid = cover(choose_grid(flat), -2, 7);
  const Tile& pick = flat[static_cast<std::size_t>(rng.integer(0, static_cast<long>(flat.size()) - 1))];
  double b = to_double(pick.freq.center());
  double amp = 1 / std::sqrt(out.e.measure());
  SampledFunction f = SampledFunction::zeros(grid);
  for (std::size_t x = 0; x < grid.count; ++x) {
    double t = grid.x(x);
    if (out.e.contains(t)) f.values[x] = amp * std::polar(1.0, 2 * M_PI * b * t);
  }
  std::vector<Spectrum> packets;
  for (const auto& t : flat) packets.push_back(packet_spectrum(t, grid));
  auto c = packet_coefficients(f, packets);
  out.coef.assign(out.tiles.size(), std::vector<double>(3, 0));
  for (std::size_t a = 0; a < out.tiles.size(); ++a) out.coef[a][out.j] = std::abs(c[a]);
  return out;
}

StandardMeasurements measure_standard(std::uint64_t seed) {
  StandardMeasurements out;
  out.seed = seed;

  ForestOptions fo;
  fo.seed = seed;
  Forest forest = generate_forest(fo);
  out.forest_trees = forest.trees.size();
  out.forest_tiles = forest.pool.size();
  out.forest_ok = forest_check(forest).empty();
  StepFunction count = counting_function(forest);
  out.multiplicity = count.sup();
  out.bmo = forest_bmo(forest).value;
  out.bmo_ok = out.bmo <= out.multiplicity;
  Rational total = 0;
  for (const auto& t : forest.trees) total += t.interval.length();
  out.l1_ok = count.l1() == total;

  SampleGrid grid = choose_grid(forest.pool);
  std::vector<Spectrum> packets;
  for (const auto& t : forest.pool) packets.push_back(packet_spectrum(t, grid));
  FrameBounds fb = frame_bounds(packets, grid, seed);
  out.synthesis_sup = fb.synthesis_sup;
  out.analysis_sup = fb.analysis_sup;
  out.duality_gap = fb.relative_gap();
  out.bessel = std::sqrt(fb.synthesis_sup) / std::log(2.0 + static_cast<double>(out.multiplicity));

  double lo = 0, hi = 0;
  for (const auto& t : forest.pool) {
    lo = std::min(lo, to_double(t.freq.lo()));
    hi = std::max(hi, to_double(t.freq.hi()));
  }
  Rng rng(derive_seed(seed, "standard-signals"));
  SampledFunction f = band_limited_noise(grid, lo, hi, rng);
  auto a = packet_coefficients(f, packets);
  std::vector<double> energy;
  for (const auto& c : a) energy.push_back(std::norm(c));
  IteratedStopping it = iterated_stopping(forest.pool, forest.trees, energy);
  out.msum = it.msum_ratio;
  out.stopping_partition = stopping_partition_ok(forest.trees, it);
  out.stopping_carleson = true;
  out.sumest_min = 1e300;
  out.sumest_max = 0;
  for (std::size_t l = 0; l < it.layers.size(); ++l) {
    double bound = std::ldexp(1.0, 2 * it.levels[l]);
    double mass = 0, length = 0;
    for (const auto& t : it.layers[l]) {
      if (carleson_ratio(forest.pool, t, energy) > bound * (1 + 1e-12)) out.stopping_carleson = false;
      for (std::size_t p : t.tiles) mass += energy[p];
      length += to_double(t.interval.length());
    }
    double r = mass / (bound * length);
    out.sumest_min = std::min(out.sumest_min, r);
    out.sumest_max = std::max(out.sumest_max, r);
  }
  if (it.layers.empty()) out.sumest_min = 0;

  SampleGrid rm_grid{0, 1.0 / 2048, 2048};
  out.rm_blocks = true;
  for (long L : {8L, 64L, 512L}) {
    auto family = orthogonal_family(rm_grid, static_cast<std::size_t>(L), derive_seed(seed, "rm-family", L));
    RmResult r = rm_maximal(family, 64, derive_seed(seed, "rm-signs", L));
    out.rm_lengths.push_back(L);
    out.rm_ratio.push_back(r.ratio());
    out.rm_blocks = out.rm_blocks && r.blocks_ok();
  }

  SampleGrid pgrid{0, 1.0 / 256, 4096};
  SampledFunction g = band_limited_noise(pgrid, -100, 100, rng);
  for (long J : {1L, 4L, 16L}) {
    std::vector<double> centres;
    for (long k = 0; k < J; ++k) centres.push_back(-100 + 200 * rng.uniform());
    ProjectionResult pr = projection_maximal(g, centres, {0, 1, 2, 3, 4, 5}, 8);
    double l = std::log(2.0 + static_cast<double>(J));
    out.projection_centres.push_back(J);
    out.projection_value.push_back(pr.ratio / (l * l));
  }

  SplitInstance si = split_instance(seed);
  out.tree_ok = true;
  auto record = [&](const SingleTreeBound& b) {
    ++out.trees_checked;
    if (!b.holds()) out.tree_ok = false;
    if (b.rhs > 0) out.tree_worst = std::max(out.tree_worst, b.lhs / b.rhs);
  };
  for (const auto& t : si.result.forest)
    record(single_tree_bound_check(si.instance.tiles, t.tree, si.coef, si.instance.params));
  SampledTree st = sampled_tree(seed);
  record(single_tree_bound_check(st.tiles, st.tree, st.coef, st.params));

  SizeCase sc = size_case(seed);
  out.size_ratio = size_estimate_check(sc.tiles, sc.coef, sc.j, sc.e, kDefaultDecay, sc.params).ratio();
  return out;
}

Fixtures calibrate_fixtures(const std::vector<StandardMeasurements>& runs) {
  if (runs.empty()) throw std::invalid_argument("calibration needs at least one run");
  Fixtures f;
  f.bump_version = reference_bump().version;
  f.sumest_min = f.msum_min = 1e300;
  for (const auto& r : runs) {
    f.seeds.push_back(r.seed);
    f.bessel_max = std::max(f.bessel_max, r.bessel);
    for (double v : r.rm_ratio) f.rm_max = std::max(f.rm_max, v);
    for (double v : r.projection_value) f.projection_max = std::max(f.projection_max, v);
    f.size_max = std::max(f.size_max, r.size_ratio);
    f.sumest_min = std::min(f.sumest_min, r.sumest_min);
    f.sumest_max = std::max(f.sumest_max, r.sumest_max);
    f.msum_min = std::min(f.msum_min, r.msum);
    f.msum_max = std::max(f.msum_max, r.msum);
  }
  f.bessel_c1 = 2 * f.bessel_max;
  f.rm_c2 = 2 * f.rm_max;
  f.projection_c3 = 2 * f.projection_max;
  f.size_c4 = 2 * f.size_max;
  f.sumest_lo = f.sumest_min / 2;
  f.sumest_hi = f.sumest_max * 2;
  f.msum_lo = f.msum_min / 2;
  f.msum_hi = f.msum_max * 2;
  return f;
}

std::vector<Verdict> check_measurements(const StandardMeasurements& m, const Fixtures& f) {
  if (f.version != kFixtureVersion) throw std::invalid_argument("fixture version mismatch");
  std::vector<Verdict> out;
  auto upper = [&](const std::string& name, double value, double bound) {
    out.push_back({name, value <= bound, value, bound});
  };
  double rm = 0, proj = 0;
  for (double v : m.rm_ratio) rm = std::max(rm, v);
  for (double v : m.projection_value) proj = std::max(proj, v);
  upper("bessel", m.bessel, f.bessel_c1);
  upper("bessel-duality", m.duality_gap, 0.05);
  upper("rm", rm, f.rm_c2);
  out.push_back({"rm-blocks", m.rm_blocks, m.rm_blocks ? 1.0 : 0.0, 1});
  upper("projection", proj, f.projection_c3);
  upper("single-tree", m.tree_worst, 1 + 1e-9);
  upper("size-estimate", m.size_ratio, f.size_c4);
  out.push_back({"sumest", m.sumest_min >= f.sumest_lo && m.sumest_max <= f.sumest_hi, m.sumest_max, f.sumest_hi});
  out.push_back({"msum", m.msum >= f.msum_lo && m.msum <= f.msum_hi, m.msum, f.msum_hi});
  out.push_back({"stopping-partition", m.stopping_partition && m.stopping_carleson, m.stopping_partition ? 1.0 : 0.0, 1});
  out.push_back({"forest", m.forest_ok, m.forest_ok ? 1.0 : 0.0, 1});
  out.push_back({"bmo", m.bmo_ok, to_double(m.bmo), static_cast<double>(m.multiplicity)});
  out.push_back({"counting-l1", m.l1_ok, m.l1_ok ? 1.0 : 0.0, 1});
  return out;
}

}  // namespace maxavg::tf
