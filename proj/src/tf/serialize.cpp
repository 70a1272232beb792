#include "maxavg/tf/serialize.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace maxavg::tf {

namespace {

std::string pos_string(const mpz_class& z) { return z.get_str(); }

mpz_class pos_value(const json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  return mpz_class(j.get<std::string>());
}

}  // namespace

json to_json(const DyadicInterval& i) {
  return {{"grid", i.grid()}, {"scale", i.scale()}, {"pos", pos_string(i.pos())},
          {"lo", to_string(i.lo())}, {"hi", to_string(i.hi())}};
}

json to_json(const Tile& t) { return {{"time", to_json(t.time)}, {"freq", to_json(t.freq)}}; }

json to_json(const Multitile& m) {
  json a = json::array();
  for (const auto& t : m.tiles) a.push_back(to_json(t));
  return a;
}

json to_json(const RankOneParams& p) {
  return {{"C0", p.C0},
          {"C1", p.C1},
          {"j_first", p.j_first},
          {"j_second", p.j_second},
          {"eps_first", p.eps_first},
          {"eps_second", p.eps_second},
          {"c_lo", to_string(p.c_lo)},
          {"c_hi", to_string(p.c_hi)}};
}

json to_json(const FrequencyLaw& law) { return {{"c", law.c}, {"a", law.a}}; }

json to_json(const RankOneInstance& inst) {
  json tiles = json::array();
  for (const auto& m : inst.tiles) tiles.push_back(to_json(m));
  return {{"law", to_json(inst.law)}, {"params", to_json(inst.params)}, {"multitiles", tiles},
          {"cluster", inst.cluster_index}};
}

json to_json(const LacunaryTree& t) {
  return {{"interval", to_json(t.interval)}, {"xi", to_string(t.xi)}, {"tiles", t.tiles}};
}

json to_json(const Forest& f) {
  json pool = json::array(), trees = json::array();
  for (const auto& t : f.pool) pool.push_back(to_json(t));
  for (const auto& t : f.trees) trees.push_back(to_json(t));
  return {{"C0", f.params.C0}, {"c_lo", to_string(f.params.c_lo)}, {"c_hi", to_string(f.params.c_hi)},
          {"pool", pool}, {"trees", trees}};
}

json to_json(const StepFunction& f) {
  json breaks = json::array();
  for (const auto& b : f.breaks) breaks.push_back(to_string(b));
  return {{"breaks", breaks}, {"values", f.values}, {"l1", to_string(f.l1())}, {"sup", f.sup()}};
}

json to_json(const SplitResult& r) {
  json trees = json::array();
  for (const auto& t : r.forest)
    trees.push_back({{"top", t.tree.top},
                     {"index", t.tree.index},
                     {"members", t.tree.members},
                     {"eps", t.eps},
                     {"step", t.step},
                     {"size", t.size},
                     {"key", to_string(t.key)},
                     {"order", t.order}});
  return {{"j", r.j}, {"m", r.m}, {"trees", trees}, {"remainder", r.remainder},
          {"initial_size", r.initial_size}, {"final_size", r.final_size}};
}

json to_json(const SplitAudit& a) {
  return {{"partition", a.partition},   {"remainder_small", a.remainder_small}, {"remainder_size", a.remainder_size},
          {"disjoint", a.disjoint},     {"monotone", a.monotone},               {"sign_condition", a.sign_condition},
          {"problems", a.problems},     {"ok", a.ok()}};
}

json to_json(const IteratedStopping& s) {
  json layers = json::array();
  for (std::size_t l = 0; l < s.layers.size(); ++l) {
    json trees = json::array();
    for (const auto& t : s.layers[l]) trees.push_back(to_json(t));
    layers.push_back({{"m", s.levels[l]}, {"trees", trees}});
  }
  return {{"top", s.top}, {"layers", layers}, {"zero_set", s.zero_set}, {"total_energy", s.total_energy},
          {"msum_ratio", s.msum_ratio}};
}

json to_json(const StandardMeasurements& m) {
  return {{"seed", m.seed},
          {"forest_trees", m.forest_trees},
          {"forest_tiles", m.forest_tiles},
          {"multiplicity", m.multiplicity},
          {"bmo", to_string(m.bmo)},
          {"bmo_ok", m.bmo_ok},
          {"l1_ok", m.l1_ok},
          {"forest_ok", m.forest_ok},
          {"synthesis_sup", m.synthesis_sup},
          {"analysis_sup", m.analysis_sup},
          {"duality_gap", m.duality_gap},
          {"bessel", m.bessel},
          {"msum", m.msum},
          {"sumest_min", m.sumest_min},
          {"sumest_max", m.sumest_max},
          {"stopping_partition", m.stopping_partition},
          {"stopping_carleson", m.stopping_carleson},
          {"rm_lengths", m.rm_lengths},
          {"rm_ratio", m.rm_ratio},
          {"rm_blocks", m.rm_blocks},
          {"projection_centres", m.projection_centres},
          {"projection_value", m.projection_value},
          {"trees_checked", m.trees_checked},
          {"tree_worst", m.tree_worst},
          {"tree_ok", m.tree_ok},
          {"size_ratio", m.size_ratio}};
}

json to_json(const Fixtures& f) {
  return {{"version", f.version},
          {"bump_version", f.bump_version},
          {"seeds", f.seeds},
          {"observed",
           {{"bessel_max", f.bessel_max},
            {"rm_max", f.rm_max},
            {"projection_max", f.projection_max},
            {"size_max", f.size_max},
            {"sumest_min", f.sumest_min},
            {"sumest_max", f.sumest_max},
            {"msum_min", f.msum_min},
            {"msum_max", f.msum_max}}},
          {"constants",
           {{"bessel_c1", f.bessel_c1},
            {"rm_c2", f.rm_c2},
            {"projection_c3", f.projection_c3},
            {"size_c4", f.size_c4},
            {"sumest_band", {f.sumest_lo, f.sumest_hi}},
            {"msum_band", {f.msum_lo, f.msum_hi}}}}};
}

json to_json(const Verdict& v) { return {{"name", v.name}, {"pass", v.pass}, {"value", v.value}, {"bound", v.bound}}; }

DyadicInterval interval_from_json(const json& j) {
  DyadicInterval i(j.at("grid").get<int>(), j.at("scale").get<long>(), pos_value(j.at("pos")));
  if (j.contains("lo") && parse_rational(j.at("lo").get<std::string>()) != i.lo())
    throw std::invalid_argument("interval endpoint does not match grid, scale and position");
  return i;
}

Tile tile_from_json(const json& j) { return Tile::make(interval_from_json(j.at("time")), interval_from_json(j.at("freq"))); }

Multitile multitile_from_json(const json& j) {
  std::vector<Tile> tiles;
  for (const auto& t : j) tiles.push_back(tile_from_json(t));
  return Multitile::make(std::move(tiles));
}

RankOneParams params_from_json(const json& j) {
  RankOneParams p;
  p.C0 = j.at("C0").get<int>();
  p.C1 = j.at("C1").get<int>();
  p.j_first = j.at("j_first").get<std::vector<int>>();
  p.j_second = j.at("j_second").get<std::vector<int>>();
  p.eps_first = j.at("eps_first").get<std::vector<int>>();
  p.eps_second = j.at("eps_second").get<std::vector<int>>();
  if (j.contains("c_lo")) p.c_lo = parse_rational(j.at("c_lo").get<std::string>());
  if (j.contains("c_hi")) p.c_hi = parse_rational(j.at("c_hi").get<std::string>());
  p.validate();
  return p;
}

FrequencyLaw law_from_json(const json& j) {
  FrequencyLaw law{j.at("c").get<std::vector<long>>(), j.at("a").get<std::vector<long>>()};
  law.validate();
  return law;
}

RankOneInstance rank_one_from_json(const json& j) {
  RankOneInstance inst;
  inst.law = law_from_json(j.at("law"));
  inst.params = params_from_json(j.at("params"));
  for (const auto& m : j.at("multitiles")) inst.tiles.push_back(multitile_from_json(m));
  if (j.contains("cluster")) inst.cluster_index = j.at("cluster").get<std::vector<int>>();
  return inst;
}

Forest forest_from_json(const json& j) {
  Forest f;
  f.params.C0 = j.at("C0").get<int>();
  f.params.c_lo = parse_rational(j.at("c_lo").get<std::string>());
  f.params.c_hi = parse_rational(j.at("c_hi").get<std::string>());
  for (const auto& t : j.at("pool")) f.pool.push_back(tile_from_json(t));
  for (const auto& t : j.at("trees")) {
    LacunaryTree tree;
    tree.interval = interval_from_json(t.at("interval"));
    tree.xi = parse_rational(t.at("xi").get<std::string>());
    tree.tiles = t.at("tiles").get<std::vector<std::size_t>>();
    for (std::size_t p : tree.tiles)
      if (p >= f.pool.size()) throw std::invalid_argument("tree refers to a tile outside the pool");
    f.trees.push_back(std::move(tree));
  }
  return f;
}

Fixtures fixtures_from_json(const json& j) {
  Fixtures f;
  f.version = j.at("version").get<int>();
  if (f.version != kFixtureVersion)
    throw std::invalid_argument("fixture version " + std::to_string(f.version) + " does not match " +
                                std::to_string(kFixtureVersion));
  f.bump_version = j.at("bump_version").get<std::string>();
  if (f.bump_version != reference_bump().version)
    throw std::invalid_argument("fixtures were calibrated with bump " + f.bump_version);
  f.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  const auto& o = j.at("observed");
  f.bessel_max = o.at("bessel_max");
  f.rm_max = o.at("rm_max");
  f.projection_max = o.at("projection_max");
  f.size_max = o.at("size_max");
  f.sumest_min = o.at("sumest_min");
  f.sumest_max = o.at("sumest_max");
  f.msum_min = o.at("msum_min");
  f.msum_max = o.at("msum_max");
  const auto& c = j.at("constants");
  f.bessel_c1 = c.at("bessel_c1");
  f.rm_c2 = c.at("rm_c2");
  f.projection_c3 = c.at("projection_c3");
  f.size_c4 = c.at("size_c4");
  f.sumest_lo = c.at("sumest_band").at(0);
  f.sumest_hi = c.at("sumest_band").at(1);
  f.msum_lo = c.at("msum_band").at(0);
  f.msum_hi = c.at("msum_band").at(1);
  return f;
}

void write_sampled(const std::string& stem, const SampledFunction& f, long scale) {
  json header = {{"format", "complex128-le"},
                 {"count", f.grid.count},
                 {"spacing", f.grid.h},
                 {"window", {f.grid.x0, f.grid.x0 + f.grid.period()}},
                 {"scale", scale}};
  std::ofstream(stem + ".json") << header.dump(2) << "\n";
  std::ofstream bin(stem + ".bin", std::ios::binary);
  static_assert(sizeof(Complex) == 2 * sizeof(double));
  bin.write(reinterpret_cast<const char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(Complex)));
  if (!bin) throw std::runtime_error("could not write " + stem + ".bin");
}

SampledFunction read_sampled(const std::string& stem) {
  std::ifstream hs(stem + ".json");
  if (!hs) throw std::runtime_error("missing " + stem + ".json");
  json header = json::parse(hs);
  SampledFunction f;
  f.grid.count = header.at("count").get<std::size_t>();
  f.grid.h = header.at("spacing").get<double>();
  f.grid.x0 = header.at("window").at(0).get<double>();
  f.values.resize(f.grid.count);
  std::ifstream bin(stem + ".bin", std::ios::binary);
  bin.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(Complex)));
  if (!bin) throw std::runtime_error("short read from " + stem + ".bin");
  return f;
}

}  // namespace maxavg::tf
