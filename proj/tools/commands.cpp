#include "commands.hpp"

#include "maxavg/json_io.hpp"
#include "maxavg/random.hpp"
#include "maxavg/tf/serialize.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

namespace maxavg::cli {

namespace {

namespace fs = std::filesystem;

const json& need(const json& cfg, const char* key) {
  if (!cfg.is_object() || !cfg.contains(key)) throw ConfigError(std::string("missing config key '") + key + "'");
  return cfg.at(key);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}
std::string num(long v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string num(std::uint64_t v, int) { return std::to_string(v); }
std::string flag(bool b) { return b ? "1" : "0"; }

AveragingMatrix matrix_from_config(const json& cfg) {
  if (cfg.contains("preset")) {
    const std::string p = cfg.at("preset").get<std::string>();
    if (p == "bilinear") return AveragingMatrix::make({{1}, {2}});
    if (p == "furstenberg") return AveragingMatrix::make({{1}, {2}, {3}});
    if (p == "squares") {
      RationalMatrix m;
      for (const auto& row : CubeSpec(2).matrix()) {
        std::vector<Rational> r;
        for (long e : row) r.push_back(Rational(e));
        m.push_back(r);
      }
      return AveragingMatrix::make(m);
    }
    throw ConfigError("unknown matrix preset '" + p + "' (bilinear, furstenberg, squares)");
  }
  if (cfg.contains("cube")) {
    RationalMatrix m;
    for (const auto& row : CubeSpec(cfg.at("cube").get<std::size_t>()).matrix()) {
      std::vector<Rational> r;
      for (long e : row) r.push_back(Rational(e));
      m.push_back(r);
    }
    return AveragingMatrix::make(m);
  }
  return matrix_from_json(need(cfg, "matrix"));
}

std::vector<std::uint64_t> seed_list(const json& cfg, std::uint64_t first, std::uint64_t last) {
  std::vector<std::uint64_t> seeds;
  if (cfg.contains("seeds")) return cfg.at("seeds").get<std::vector<std::uint64_t>>();
  if (cfg.contains("seed_range")) {
    auto r = cfg.at("seed_range").get<std::vector<std::uint64_t>>();
    if (r.size() != 2 || r[0] > r[1]) throw ConfigError("seed_range must be [first, last]");
    first = r[0];
    last = r[1];
  } else if (cfg.contains("seed")) {
    first = last = cfg.at("seed").get<std::uint64_t>();
  }
  for (std::uint64_t s = first; s <= last; ++s) seeds.push_back(s);
  return seeds;
}

json base_report(const std::string& name, const json& cfg) {
  json r = {{"command", name}, {"config", cfg}};
  json prov = json::object();
  if (cfg.contains("seed")) prov["seed"] = cfg.at("seed");
  r["provenance"] = prov;
  return r;
}

tf::Fixtures load_fixtures(const json& cfg) {
  fs::path path = cfg.value("fixtures", std::string("fixtures/constants.json"));
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("fixtures " + path.string() + ": " + e.what());
  }
  try {
    return tf::fixtures_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("fixtures " + path.string() + ": " + e.what());
  }
}

// ---- region

Output cmd_region(const json& cfg) {
  Output out;
  out.report = base_report("region", cfg);
  const AveragingMatrix a = matrix_from_config(cfg);
  const std::size_t resolution = cfg.value("resolution", std::size_t{1024});
  RationalMatrix e = extend_matrix(a);

  json res = {{"n", a.n()},
              {"matrix", to_json(a)},
              {"rank_star", nondegeneracy_rank(a.entries)},
              {"rank_star_extended", nondegeneracy_rank(e)},
              {"k", complexity(a)},
              {"threshold", to_json(corollary_threshold(a))},
              {"resolution", resolution}};

  json sets = json::array();
  if (cfg.contains("epsilon")) {
    const json& eps = cfg.at("epsilon");
    std::vector<json> list = eps.is_array() ? eps.get<std::vector<json>>() : std::vector<json>{eps};
    for (const auto& x : list) sets.push_back(to_json(vertex_set(a, rational_from_json(x))));
  }
  res["vertex_sets"] = sets;

  std::vector<std::string> header{"point"};
  for (std::size_t i = 0; i < a.rows; ++i) header.push_back("x" + std::to_string(i + 1));
  for (const char* c : {"inside", "witness_epsilon", "certificate_ok", "corollary"}) header.push_back(c);
  Csv csv(header);

  json points = json::array();
  if (cfg.contains("points")) {
    std::size_t idx = 0;
    for (const auto& p : cfg.at("points")) {
      ExponentTuple x = exponents_from_json(p);
      MembershipVerdict v = region_contains(a, x, resolution);
      bool cert = v.inside() && verify_certificate(v, x);
      bool cor = corollary_region_contains(a, x);
      json entry = {{"point", to_json(x)}, {"verdict", to_json(v)}, {"certificate_ok", cert}, {"corollary", cor}};
      points.push_back(entry);
      std::vector<std::string> row{std::to_string(idx++)};
      for (const auto& r : x.reciprocals) row.push_back(to_string(r));
      row.push_back(flag(v.inside()));
      row.push_back(v.witness_epsilon ? to_string(*v.witness_epsilon) : "");
      row.push_back(flag(cert));
      row.push_back(flag(cor));
      csv.row(row);
    }
  }
  res["points"] = points;

  if (cfg.contains("grid")) {
    const json& g = cfg.at("grid");
    Rational step = rational_from_json(g.value("step", json("1/50")));
    if (step <= 0 || step >= 1) throw ConfigError("grid.step must lie in (0, 1)");
    std::vector<std::size_t> axes = g.value("axes", std::vector<std::size_t>{0, 1});
    if (axes.empty() || axes.size() > 3) throw ConfigError("grid.axes must name 1 to 3 coordinates");
    std::vector<Rational> base(a.rows, Rational(0));
    if (g.contains("fixed")) {
      const auto& f = g.at("fixed");
      if (f.size() != a.rows) throw ConfigError("grid.fixed must have one entry per coordinate");
      for (std::size_t i = 0; i < a.rows; ++i) base[i] = rational_from_json(f[i]);
    }
    for (auto ax : axes)
      if (ax >= a.rows) throw ConfigError("grid axis out of range");
    std::vector<Rational> values;
    for (Rational v = 0; v < 1; v += step) values.push_back(v);

    std::vector<std::string> gh;
    for (auto ax : axes) gh.push_back("x" + std::to_string(ax + 1));
    gh.push_back("inside");
    gh.push_back("corollary");
    Csv gcsv(gh);
    std::size_t total = 1, inside = 0, agree = 0;
    for (std::size_t k = 0; k < axes.size(); ++k) total *= values.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::vector<Rational> pt = base;
      std::size_t rest = flat;
      std::vector<std::string> row;
      for (auto ax : axes) {
        pt[ax] = values[rest % values.size()];
        rest /= values.size();
      }
      for (auto ax : axes) row.push_back(to_string(pt[ax]));
      ExponentTuple x = ExponentTuple::make(pt);
      bool in = region_contains(a, x, resolution).inside();
      bool cor = corollary_region_contains(a, x);
      inside += in;
      agree += in == cor;
      row.push_back(flag(in));
      row.push_back(flag(cor));
      gcsv.row(row);
    }
    res["grid"] = {{"step", to_json(step)}, {"axes", axes}, {"points", total}, {"inside", inside},
                   {"agrees_with_corollary", agree}};
    out.grid_csv = gcsv.str();
  }
  out.report["result"] = res;
  out.csv = csv.str();
  return out;
}

// ---- eval / search / probe

std::vector<Signal> signals_from_config(const json& cfg) {
  std::vector<Signal> sig;
  for (const auto& s : need(cfg, "signals")) {
    if (s.is_object() && s.contains("file"))
      sig.push_back(parse_signal_text(read_file(s.at("file").get<std::string>())));
    else
      sig.push_back(signal_from_json(s));
  }
  return sig;
}

Output cmd_eval(const json& cfg) {
  Output out;
  out.report = base_report("eval", cfg);
  IntMatrix a = integer_matrix(matrix_from_config(cfg));
  std::vector<Signal> sig = signals_from_config(cfg);
  if (sig.size() != a.size()) throw ConfigError("need one signal per matrix row");
  const long cap = cfg.value("cap", 0L);

  std::vector<long> xs;
  json res = json::object();
  if (cfg.contains("points")) {
    xs = cfg.at("points").get<std::vector<long>>();
  } else {
    long lo, hi;
    if (cfg.contains("window")) {
      lo = cfg.at("window").at("lo").get<long>();
      hi = cfg.at("window").at("hi").get<long>();
      res["window_exact"] = false;
    } else {
      EvaluationWindow w = evaluation_window(a, sig);
      lo = w.lo;
      hi = w.hi;
      res["window_exact"] = w.exact;
    }
    if (hi < lo) throw ConfigError("window.hi < window.lo");
    for (long x = lo; x <= hi; ++x) xs.push_back(x);
  }

  Csv csv({"x", "value", "argmax_n"});
  std::vector<MaximalValue> vals(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) vals[k] = maximal_at(a, sig, xs[k], cap);
  json rows = json::array();
  Signal output;
  output.start = xs.empty() ? 0 : xs.front();
  bool contiguous = true;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    rows.push_back({{"x", xs[k]}, {"value", vals[k].value}, {"argmax_n", vals[k].argmax_n}});
    csv.row({num(xs[k]), num(vals[k].value), num(vals[k].argmax_n)});
    if (k && xs[k] != xs[k - 1] + 1) contiguous = false;
    output.values.push_back(vals[k].value);
  }
  res["values"] = rows;
  if (cfg.contains("exponents") && contiguous) {
    ExponentTuple p = exponents_from_json(cfg.at("exponents"));
    res["ratio"] = operator_ratio(output, sig, p);
  }
  out.report["result"] = res;
  out.csv = csv.str();
  return out;
}

std::string p_of(const Rational& x) { return x == 0 ? "inf" : num(1.0 / x.get_d()); }

Output cmd_search(const json& cfg) {
  Output out;
  out.report = base_report("search", cfg);
  IntMatrix a = integer_matrix(matrix_from_config(cfg));
  ExponentTuple p = exponents_from_json(need(cfg, "exponents"));
  if (p.size() != a.size()) throw ConfigError("need one exponent per matrix row");
  SearchOptions o;
  o.radius = cfg.value("radius", o.radius);
  o.trials = cfg.value("trials", o.trials);
  o.seed = cfg.value("seed", o.seed);
  o.local_steps = cfg.value("local_steps", o.local_steps);
  NormReport r = norm_search(a, p, o);
  out.report["result"] = to_json(r);

  std::vector<std::string> header{"seed", "trial", "family", "ratio"};
  for (std::size_t i = 0; i < p.size(); ++i) header.push_back("p" + std::to_string(i + 1));
  Csv csv(header);
  for (std::size_t t = 0; t < r.trial_ratios.size(); ++t) {
    std::vector<std::string> row{num(r.seed, 0), num(t), std::to_string(r.trial_family[t]), num(r.trial_ratios[t])};
    for (const auto& x : p.reciprocals) row.push_back(p_of(x));
    csv.row(row);
  }
  out.csv = csv.str();
  return out;
}

Output cmd_probe(const json& cfg) {
  Output out;
  out.report = base_report("probe", cfg);
  IntMatrix a = integer_matrix(matrix_from_config(cfg));
  const long size = cfg.value("system_size", 31L);
  FiniteSystem sys(size);
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
  const std::size_t instances = cfg.value("instances", std::size_t{1});
  const bool absolute = cfg.value("absolute", false);
  std::vector<long> schedule = cfg.value("schedule", std::vector<long>{15, 155, 1550});
  for (long l : schedule)
    if (l < 0) throw ConfigError("schedule entries must be >= 0");

  Csv csv({"instance", "L", "exact_period", "deviation"});
  json table = json::array();
  std::size_t monotone = 0;
  for (std::size_t inst = 0; inst < instances; ++inst) {
    Rng rng(derive_seed(seed, "probe", inst));
    std::vector<std::vector<double>> f(a.size(), std::vector<double>(static_cast<std::size_t>(size)));
    for (auto& fi : f)
      for (auto& v : fi) v = 2 * rng.uniform() - 1;
    std::vector<double> dev = convergence_probe(a, sys, f, schedule, absolute);
    bool mono = true;
    for (std::size_t k = 1; k < dev.size(); ++k) mono = mono && dev[k] < dev[k - 1];
    monotone += mono;
    for (std::size_t k = 0; k < schedule.size(); ++k)
      csv.row({num(inst), num(schedule[k]), flag((2 * schedule[k] + 1) % size == 0), num(dev[k])});
    table.push_back({{"instance", inst}, {"deviations", dev}, {"monotone", mono}});
  }
  out.report["result"] = {{"system_size", size}, {"schedule", schedule}, {"instances", table},
                          {"monotone_count", monotone}};
  out.csv = csv.str();
  return out;
}

// ---- tf / calibrate

struct CheckRow {
  std::uint64_t seed;
  std::string name;
  bool pass;
  double value, bound;
};

json split_section(const tf::SplitInstance& si, std::vector<CheckRow>& rows, std::uint64_t seed) {
  double bound = std::ldexp(1.0, si.m);
  rows.push_back({seed, "split-partition", si.audit.partition, 0, 0});
  rows.push_back({seed, "split-remainder", si.audit.remainder_small, si.audit.remainder_size, bound});
  rows.push_back({seed, "split-disjoint", si.audit.disjoint, 0, 0});
  rows.push_back({seed, "split-monotone", si.audit.monotone, 0, 0});
  rows.push_back({seed, "split-sign", si.audit.sign_condition, 0, 0});
  return {{"tiles", si.instance.tiles.size()}, {"result", tf::to_json(si.result)}, {"audit", tf::to_json(si.audit)}};
}

json forest_section(const json& cfg, std::uint64_t seed, std::vector<CheckRow>& rows) {
  tf::ForestOptions fo;
  fo.seed = seed;
  fo.trees = cfg.value("forest_trees", fo.trees);
  const long a = cfg.value("enlargement", 1L);
  tf::Forest f = tf::generate_forest(fo);
  auto problems = tf::forest_check(f);
  tf::StepFunction n = tf::counting_function(f);
  Rational total = 0;
  std::vector<tf::DyadicInterval> intervals;
  for (const auto& t : f.trees) {
    total += t.interval.length();
    intervals.push_back(t.interval);
  }
  tf::BmoValue bmo = tf::forest_bmo(f);
  rows.push_back({seed, "forest", problems.empty(), static_cast<double>(problems.size()), 0});
  rows.push_back({seed, "counting-l1", n.l1() == total, n.l1().get_d(), total.get_d()});
  rows.push_back({seed, "bmo", bmo.value <= n.sup(), bmo.value.get_d(), static_cast<double>(n.sup())});

  std::vector<std::string> sparse_problems;
  for (const auto& fam : tf::sparsify(intervals, a))
    for (auto& p : tf::sparse_check(intervals, fam, a)) sparse_problems.push_back(p);
  // layers are taken per sparse subforest, over its distinct enlargements
  std::vector<std::string> layer_problems;
  bool tiles_ok = true;
  auto subforests = tf::sparse_subforests(f, a);
  for (const auto& sf : subforests) {
    tf::TileLayering tl = tf::layer_tiles(f.pool, sf, a);
    tiles_ok = tiles_ok && tl.partition_ok();
    std::set<tf::DyadicInterval> distinct(tl.enlarged.begin(), tl.enlarged.end());
    std::vector<tf::DyadicInterval> enlarged(distinct.begin(), distinct.end());
    for (auto& p : tf::layer_check(enlarged, tf::layer_intervals(enlarged))) layer_problems.push_back(p);
  }
  rows.push_back({seed, "sparse", sparse_problems.empty(), static_cast<double>(sparse_problems.size()), 0});
  rows.push_back({seed, "layers", layer_problems.empty(), static_cast<double>(layer_problems.size()), 0});
  rows.push_back({seed, "tile-layers", tiles_ok, 0, 0});

  json out = {{"forest", tf::to_json(f)},
              {"problems", problems},
              {"counting", tf::to_json(n)},
              {"bmo", to_string(bmo.value)},
              {"bmo_witness", tf::to_json(bmo.witness)},
              {"enlargement", a},
              {"subforests", subforests.size()},
              {"sparse_problems", sparse_problems},
              {"layer_problems", layer_problems}};
  return out;
}

Output cmd_tf(const json& cfg) {
  Output out;
  out.report = base_report("tf", cfg);
  std::vector<CheckRow> rows;
  json res = json::object();

  if (cfg.contains("instance")) {
    const json& ij = cfg.at("instance");
    if (!ij.is_object()) throw ConfigError("instance must be an object");
    if (!ij.contains("multitiles") || ij.at("multitiles").empty()) {
      out.report["result"] = {{"tiles", 0}, {"trees", json::array()}};
      out.csv = Csv({"seed", "check", "pass", "value", "bound"}).str();
      return out;
    }
    tf::RankOneInstance inst = tf::rank_one_from_json(ij);
    const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
    tf::SplitInstance si;
    si.instance = inst;
    si.coef = tf::synthetic_coefficients(inst.tiles, seed);
    si.j = cfg.value("j", 0);
    if (si.j < 0 || si.j >= static_cast<int>(inst.params.n())) throw ConfigError("j out of range");
    tf::TreeOrder order(inst.tiles);
    std::vector<char> all(inst.tiles.size(), 1);
    si.m = cfg.contains("m") ? cfg.at("m").get<int>()
                             : tf::split_exponent(tf::tree_size(order, si.coef, all, all, si.j, inst.params).size);
    auto violations = tf::rank_one_check(inst.tiles, inst.params);
    rows.push_back({seed, "rank-one", violations.empty(), static_cast<double>(violations.size()), 0});
    si.result = tf::split_by_size(inst.tiles, si.j, si.m, si.coef, inst.params);
    si.audit = tf::audit_split(inst.tiles, si.result, si.coef, inst.params);
    res["instance"] = split_section(si, rows, seed);
  } else {
    std::vector<std::string> checks =
        cfg.value("checks", std::vector<std::string>{"split", "forest", "inequalities"});
    const std::size_t count = cfg.value("count", std::size_t{200});
    bool want_split = false, want_forest = false, want_ineq = false;
    for (const auto& c : checks) {
      if (c == "split") want_split = true;
      else if (c == "forest") want_forest = true;
      else if (c == "inequalities") want_ineq = true;
      else throw ConfigError("unknown check '" + c + "' (split, forest, inequalities)");
    }
    tf::Fixtures fixtures;
    if (want_ineq) {
      fixtures = load_fixtures(cfg);
      out.report["provenance"]["fixture_version"] = fixtures.version;
      out.report["provenance"]["fixture_bump"] = fixtures.bump_version;
    }
    json per_seed = json::array();
    for (std::uint64_t seed : seed_list(cfg, 1, 1)) {
      json entry = {{"seed", seed}};
      if (want_split) entry["split"] = split_section(tf::split_instance(seed, count), rows, seed);
      if (want_forest) entry["forest"] = forest_section(cfg, seed, rows);
      if (want_ineq) {
        tf::StandardMeasurements m = tf::measure_standard(seed);
        json verdicts = json::array();
        for (const auto& v : tf::check_measurements(m, fixtures)) {
          rows.push_back({seed, v.name, v.pass, v.value, v.bound});
          verdicts.push_back(tf::to_json(v));
        }
        entry["measurements"] = tf::to_json(m);
        entry["verdicts"] = verdicts;
      }
      per_seed.push_back(entry);
    }
    res["seeds"] = per_seed;
  }

  Csv csv({"seed", "check", "pass", "value", "bound"});
  std::size_t failed = 0;
  for (const auto& r : rows) {
    csv.row({num(r.seed, 0), r.name, flag(r.pass), num(r.value), num(r.bound)});
    failed += !r.pass;
  }
  res["checks"] = rows.size();
  res["failed"] = failed;
  out.checks_passed = failed == 0;
  out.report["result"] = res;
  out.csv = csv.str();
  return out;
}

Output cmd_calibrate(const json& cfg) {
  Output out;
  out.report = base_report("calibrate", cfg);
  std::vector<std::uint64_t> seeds = seed_list(cfg, 1, 20);
  if (seeds.empty()) throw ConfigError("calibrate needs at least one seed");
  std::vector<tf::StandardMeasurements> runs;
  Csv csv({"seed", "bessel", "rm_max", "projection_max", "size_ratio", "msum", "sumest_min", "sumest_max"});
  for (auto s : seeds) {
    runs.push_back(tf::measure_standard(s));
    const auto& m = runs.back();
    double rm = 0, pr = 0;
    for (double v : m.rm_ratio) rm = std::max(rm, v);
    for (double v : m.projection_value) pr = std::max(pr, v);
    csv.row({num(s, 0), num(m.bessel), num(rm), num(pr), num(m.size_ratio), num(m.msum), num(m.sumest_min),
             num(m.sumest_max)});
  }
  tf::Fixtures f = tf::calibrate_fixtures(runs);
  if (cfg.contains("bump_version")) f.bump_version = cfg.at("bump_version").get<std::string>();
  json fj = tf::to_json(f);
  fs::path path = cfg.value("fixtures", std::string("fixtures/constants.json"));
  out.extra_files.emplace_back(path, fj.dump(2) + "\n");
  out.report["result"] = {{"fixtures_path", path.string()}, {"fixtures", fj}};
  out.report["provenance"]["fixture_version"] = f.version;
  out.csv = csv.str();
  return out;
}

// ---- report: summary over earlier report.json files

Output cmd_report(const json& cfg) {
  Output out;
  out.report = base_report("report", cfg);
  Csv csv({"input", "command", "failed"});
  json items = json::array();
  for (const auto& p : need(cfg, "inputs")) {
    const std::string path = p.get<std::string>();
    json r;
    try {
      r = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
      throw ConfigError(path + ": " + e.what());
    }
    const std::string command = r.value("command", std::string("?"));
    long failed = 0;
    if (r.contains("result") && r["result"].is_object()) failed = r["result"].value("failed", 0L);
    json keys = json::array();
    if (r.contains("result") && r["result"].is_object())
      for (auto it = r["result"].begin(); it != r["result"].end(); ++it) keys.push_back(it.key());
    items.push_back({{"input", path}, {"command", command}, {"failed", failed}, {"result_keys", keys}});
    csv.row({path, command, num(failed)});
  }
  out.report["result"] = {{"reports", items}};
  out.csv = csv.str();
  return out;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"region", "eval", "search", "probe", "tf", "calibrate", "report"};
  return names;
}

void apply_override(json& config, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &config;
  std::size_t start = 0;
  while (true) {
    auto dot = key.find('.', start);
    std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("empty path component in '" + key + "'");
    json* next;
    if (node->is_array()) {
      std::size_t i;
      try {
        i = std::stoul(part);
      } catch (...) {
        throw ConfigError("'" + part + "' indexes an array in '" + key + "'");
      }
      if (i >= node->size()) throw ConfigError("index " + part + " out of range in '" + key + "'");
      next = &(*node)[i];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ConfigError("'" + key + "' descends into a scalar");
      next = &(*node)[part];
    }
    if (dot == std::string::npos) {
      *next = value;
      return;
    }
    node = next;
    start = dot + 1;
  }
}

Output run_command(const std::string& name, const json& config) {
  static const std::map<std::string, std::function<Output(const json&)>> table{
      {"region", cmd_region}, {"eval", cmd_eval}, {"search", cmd_search},       {"probe", cmd_probe},
      {"tf", cmd_tf},         {"calibrate", cmd_calibrate}, {"report", cmd_report}};
  auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown command '" + name + "'");
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  return it->second(config);
}

void write_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw std::runtime_error("cannot write " + tmp.string());
    o << contents;
    o.flush();
    if (!o) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace maxavg::cli
