// Acceptance runner: one PASS/FAIL line per criterion, tolerances fixed below.

#include "maxavg/discrete_averaging.hpp"
#include "maxavg/exponent_region.hpp"
#include "maxavg/random.hpp"
#include "maxavg/tf/instances.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace maxavg;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kMaximalTol = 1e-12;    // criterion 3, relative
constexpr double kErgodicTol = 1e-12;    // criterion 4, absolute
constexpr double kMonotoneShare = 0.95;  // criterion 4
constexpr double kRegionSeconds = 10, kGridSeconds = 60, kErgodicSeconds = 120, kSplitSeconds = 300;

struct Options {
  std::string cli, configs, workdir;
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

int run(const std::string& command) {
  int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::map<std::string, std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  auto split = [](const std::string& l) {
    std::vector<std::string> out;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  if (std::getline(in, line)) header = split(line);
  while (std::getline(in, line)) {
    auto cells = split(line);
    std::map<std::string, std::string> row;
    for (std::size_t k = 0; k < header.size() && k < cells.size(); ++k) row[header[k]] = cells[k];
    rows.push_back(row);
  }
  return rows;
}

// ---- 1: region examples

Outcome criterion_region(const Options& opt) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  AveragingMatrix bil = AveragingMatrix::make({{1}, {2}});
  AveragingMatrix fur = AveragingMatrix::make({{1}, {2}, {3}});
  AveragingMatrix sq = AveragingMatrix::make({{0, 1}, {1, 0}, {1, 1}});

  o.require(nondegeneracy_rank(bil.entries) == 1, "bilinear rank*(A) = 1");
  o.require(nondegeneracy_rank(extend_matrix(bil)) == 2, "bilinear rank*(E(A)) = 2");
  for (Rational eps : {frac(1, 100), frac(1, 20), frac(1, 8), frac(6, 25)}) {
    Rational h = frac(1, 2) + eps, f = 1 - eps;
    std::set<Vertex> want{{0, 0}, {0, h}, {h, 0}, {0, f}, {f, 0}, {h, f}, {f, h}};
    VertexSet v = vertex_set(bil, eps);
    std::set<Vertex> got(v.vertices.begin(), v.vertices.end());
    o.require(got == want && v.vertices.size() == 7, "bilinear S_{A,eps} at eps = " + to_string(eps));
  }
  o.require(nondegeneracy_rank(extend_matrix(fur)) == 2, "Furstenberg rank*(E(A)) = 2");
  o.require(complexity(fur) == 2, "Furstenberg k = 2");
  o.require(nondegeneracy_rank(sq.entries) == 2, "squares rank*(A) = 2");
  o.require(nondegeneracy_rank(extend_matrix(sq)) == 3, "squares rank*(E(A)) = 3");
  o.require(complexity(sq) == 1, "squares k = 1");
  o.require(corollary_threshold(sq) == frac(5, 2), "squares threshold 5/2");

  // the same numbers through the command line tool
  fs::path out = fs::path(opt.workdir) / "c1";
  fs::create_directories(out);
  int code = run(quote(opt.cli) + " region --config " + quote(opt.configs + "/region_squares.json") + " --out " +
                 quote(out.string()) + " > /dev/null");
  o.require(code == 0, "cli region exit code");
  if (code == 0) {
    json r = json::parse(slurp(out / "report.json"))["result"];
    o.require(r["k"] == 1 && r["threshold"] == "5/2", "cli squares report k = 1, threshold 5/2");
  }
  double secs = seconds_since(t0);
  o.require(secs < kRegionSeconds, "runtime under 10 s");
  o.detail << " time " << secs << " s";
  return o;
}

// ---- 2: bilinear membership grid

Outcome criterion_grid(const Options&) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  AveragingMatrix bil = AveragingMatrix::make({{1}, {2}});
  std::size_t mismatches = 0, on_line = 0;
  std::string first;
  for (long i = 0; i < 50; ++i)
    for (long j = 0; j < 50; ++j) {
      Rational a = frac(i, 50), b = frac(j, 50);
      bool predicate = a + b < frac(3, 2) && a < 1 && b < 1;
      bool found = region_contains(bil, ExponentTuple::make({a, b}), 1024).inside();
      if (found != predicate) {
        ++mismatches;
        if (a + b == frac(3, 2)) ++on_line;
        if (first.empty()) first = "(" + to_string(a) + ", " + to_string(b) + ")";
      }
    }
  double secs = seconds_since(t0);
  o.detail << " mismatches " << mismatches << " of 2500";
  if (mismatches) o.detail << ", " << on_line << " on a+b = 3/2 (hull of S_{A,eps} contains that segment), first " << first;
  o.require(mismatches == 0, "grid agrees with a+b < 3/2");
  o.require(secs < kGridSeconds, "runtime under 60 s");
  o.detail << "; time " << secs << " s";
  return o;
}

// ---- 3: maximal operator against brute force

double brute_maximal(const IntMatrix& a, const std::vector<Signal>& f, long x, long nmax) {
  double best = 0;
  const std::size_t m = a.front().size();
  for (long n = 1; n <= nmax; ++n) {
    std::vector<long> t(m, -n);
    double sum = 0;
    while (true) {
      double prod = 1;
      for (std::size_t i = 0; i < a.size() && prod != 0; ++i) {
        long at = x;
        for (std::size_t j = 0; j < m; ++j) at += a[i][j] * t[j];
        prod *= std::abs(f[i].at(at));
      }
      sum += prod;
      std::size_t j = 0;
      while (j < m && t[j] == n) t[j++] = -n;
      if (j == m) break;
      ++t[j];
    }
    best = std::max(best, sum / std::pow(2.0 * static_cast<double>(n) + 1, static_cast<double>(m)));
  }
  return best;
}

Signal sparse_signal(Rng& rng, long radius) {
  Signal s;
  long lo = rng.integer(-radius, radius), hi = rng.integer(lo, radius);
  s.start = lo;
  s.values.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (auto& v : s.values)
    if (rng.coin(0.3)) v = 2 * rng.uniform() - 1;
  s.values.front() = s.values.front() == 0 ? 0.5 : s.values.front();
  return s;
}

Outcome criterion_maximal(const Options&) {
  Outcome o;
  const IntMatrix bil{{1}, {2}}, diag{{1, 0}, {0, 1}};
  double worst = 0;
  std::size_t points = 0, dom_fail = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(derive_seed(seed, "acceptance-maximal"));
    std::vector<Signal> f{sparse_signal(rng, 32), sparse_signal(rng, 32)};
    long lo = std::min(f[0].start, f[1].start), hi = std::max(f[0].last(), f[1].last());
    long nmax = 4 * (hi - lo + 1);
    for (long x = -40; x <= 40; x += 3) {
      double fast = maximal_at(bil, f, x).value;
      double slow = brute_maximal(bil, f, x, nmax);
      worst = std::max(worst, std::abs(fast - slow) / std::max(1.0, std::abs(slow)));
      ++points;
    }
    Signal m0 = hl_maximal(f[0], -40, 40), m1 = hl_maximal(f[1], -40, 40);
    for (long x = -40; x <= 40; ++x) {
      double t = maximal_at(diag, f, x).value;
      if (t > m0.at(x) * m1.at(x) * (1 + 1e-12) + 1e-300) ++dom_fail;
    }
  }
  o.detail << " points " << points << ", worst relative gap " << worst << ", domination failures " << dom_fail;
  o.require(worst <= kMaximalTol, "maximal_at within 1e-12 of brute force");
  o.require(dom_fail == 0, "diagonal domination");
  return o;
}

// ---- 4: ergodic exactness and the convergence probe

double brute_period_mean(const IntMatrix& a, const std::vector<std::vector<double>>& f, long size, long x) {
  const std::size_t m = a.front().size();
  std::vector<long> t(m, 0);
  double sum = 0;
  std::size_t count = 0;
  while (true) {
    double prod = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      long at = x;
      for (std::size_t j = 0; j < m; ++j) at += a[i][j] * t[j];
      at %= size;
      if (at < 0) at += size;
      prod *= f[i][static_cast<std::size_t>(at)];
    }
    sum += prod;
    ++count;
    std::size_t j = 0;
    while (j < m && t[j] == size - 1) t[j++] = 0;
    if (j == m) break;
    ++t[j];
  }
  return sum / static_cast<double>(count);
}

Outcome criterion_ergodic(const Options&) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const long size = 31;
  FiniteSystem sys(size);
  const IntMatrix sq = CubeSpec(2).matrix(), fur{{1}, {2}, {3}};
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(derive_seed(seed, "acceptance-ergodic"));
    for (const IntMatrix* a : {&sq, &fur}) {
      std::vector<std::vector<double>> f(a->size(), std::vector<double>(size));
      for (auto& fi : f)
        for (auto& v : fi) v = 2 * rng.uniform() - 1;
      for (long l : {15L, 46L, 77L})
        for (long x = 0; x < size; ++x)
          worst = std::max(worst, std::abs(ergodic_average(*a, sys, f, l, x) - brute_period_mean(*a, f, size, x)));
    }
  }
  o.detail << " exact-period worst gap " << worst;
  o.require(worst <= kErgodicTol, "exact-period averages equal the period mean");

  const std::vector<long> schedule{15, 155, 1550};
  std::size_t monotone = 0, tail = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(derive_seed(seed, "acceptance-probe"));
    std::vector<std::vector<double>> f(3, std::vector<double>(size));
    for (auto& fi : f)
      for (auto& v : fi) v = 2 * rng.uniform() - 1;
    auto dev = convergence_probe(sq, sys, f, schedule);
    if (dev[1] < dev[0] && dev[2] < dev[1]) ++monotone;
    if (dev[2] < dev[1]) ++tail;
  }
  double share = monotone / 50.0;
  o.detail << "; L = 15,155,1550 monotone on " << monotone << "/50 (L = 15 has 2L+1 = 31, deviation 0), 155 -> 1550 on "
           << tail << "/50";
  o.require(share >= kMonotoneShare, "monotone decrease on 95% of instances");
  double secs = seconds_since(t0);
  o.require(secs < kErgodicSeconds, "runtime under 2 min");
  o.detail << "; time " << secs << " s";
  return o;
}

// ---- 5: tree selection

Outcome criterion_split(const Options&) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::size_t partition_fail = 0, remainder_fail = 0, disjoint_fail = 0, trees = 0, tiles = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    tf::SplitInstance si = tf::split_instance(seed, 200);
    const auto& s = si.instance.tiles;
    tiles += s.size();
    std::vector<int> seen(s.size(), 0);
    for (const auto& t : si.result.forest)
      for (auto k : t.tree.members) ++seen[k];
    for (auto k : si.result.remainder) ++seen[k];
    if (!std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; })) ++partition_fail;

    std::vector<char> alive(s.size(), 0), tops(s.size(), 1);
    for (auto k : si.result.remainder) alive[k] = 1;
    double rest = tf::tree_size_direct(s, si.coef, alive, tops, si.j, si.instance.params);
    if (rest > std::ldexp(1.0, si.m) * (1 + 1e-12)) ++remainder_fail;

    std::map<std::pair<int, int>, std::vector<const tf::SelectedTree*>> classes;
    for (const auto& t : si.result.forest)
      if (t.step == 3) classes[{t.tree.index, t.eps}].push_back(&t);
    for (const auto& [key, list] : classes)
      for (std::size_t a = 0; a < list.size(); ++a)
        for (std::size_t b = a + 1; b < list.size(); ++b)
          if (!tf::strongly_disjoint(s, list[a]->tree, list[b]->tree, si.j)) ++disjoint_fail;
    trees += si.result.forest.size();
  }
  double secs = seconds_since(t0);
  o.detail << " 50 instances, " << tiles << " multitiles, " << trees << " trees; partition failures "
           << partition_fail << ", remainder failures " << remainder_fail << ", disjointness failures "
           << disjoint_fail << "; time " << secs << " s";
  o.require(partition_fail == 0 && remainder_fail == 0 && disjoint_fail == 0, "all split postconditions");
  o.require(secs < kSplitSeconds, "runtime under 5 min");
  return o;
}

// ---- 6: forest functionals

Outcome criterion_forest(const Options&) {
  Outcome o;
  std::size_t bmo_fail = 0, l1_fail = 0, check_fail = 0;
  Rational worst = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    tf::ForestOptions fo;
    fo.seed = seed;
    tf::Forest f = tf::generate_forest(fo);
    if (!tf::forest_check(f).empty()) ++check_fail;
    tf::StepFunction n = tf::counting_function(f);
    Rational total = 0;
    for (const auto& t : f.trees) total += t.interval.length();
    if (n.l1() != total) ++l1_fail;
    Rational bmo = tf::forest_bmo(f).value, sup(n.sup());
    if (bmo > sup) ++bmo_fail;
    if (sup > 0 && Rational(bmo / sup) > worst) worst = bmo / sup;
  }
  o.detail << " 200 forests; BMO failures " << bmo_fail << ", L1 failures " << l1_fail << ", forest check failures "
           << check_fail << ", max BMO/sup " << to_string(worst);
  o.require(bmo_fail == 0, "BMO <= sup N_F");
  o.require(l1_fail == 0, "L1 of N_F = sum |I_T|");
  o.require(check_fail == 0, "generated forests are valid");
  return o;
}

// ---- 7: calibrated inequality suite through the command line tool

Outcome criterion_calibrated(const Options& opt) {
  Outcome o;
  fs::path dir = fs::path(opt.workdir) / "c7";
  fs::create_directories(dir);
  std::string fixtures = (dir / "constants.json").string();
  int cal = run(quote(opt.cli) + " calibrate --config " + quote(opt.configs + "/calibrate.json") +
                " --set seed_range=[1,20] --set fixtures=" + quote(fixtures) + " --out " + quote((dir / "cal").string()) +
                " > /dev/null");
  o.require(cal == 0, "calibrate exit code");
  if (cal != 0) return o;
  int code = run(quote(opt.cli) + " tf --config " + quote(opt.configs + "/tf.json") +
                 " --set seed_range=[21,40] --set checks='[\"inequalities\"]' --set fixtures=" + quote(fixtures) +
                 " --out " + quote((dir / "tf").string()) + " > /dev/null 2>&1");
  const std::set<std::string> wanted{"bessel", "rm", "projection", "single-tree", "sumest", "msum"};
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // pass, total
  std::map<std::string, double> worst_margin;
  for (const auto& row : read_csv(dir / "tf" / "report.csv")) {
    auto& t = tally[row.at("check")];
    ++t.second;
    if (row.at("pass") == "1") ++t.first;
    double v = std::stod(row.at("value")), b = std::stod(row.at("bound"));
    if (b > 0) worst_margin[row.at("check")] = std::max(worst_margin[row.at("check")], v / b);
  }
  for (const auto& name : wanted) {
    auto it = tally.find(name);
    bool ok = it != tally.end() && it->second.second == 20 && it->second.first == 20;
    o.require(ok, name + " on seeds 21-40");
    if (it != tally.end())
      o.detail << " " << name << " " << it->second.first << "/" << it->second.second << " (max value/bound "
               << worst_margin[name] << ")";
  }
  o.require(code == 0, "tf exit code 0 (every check in the suite passes)");
  return o;
}

// ---- 8: determinism of every command

Outcome criterion_determinism(const Options& opt) {
  Outcome o;
  fs::path dir = fs::path(opt.workdir) / "c8";
  fs::create_directories(dir);
  const std::string fixtures = (dir / "constants.json").string();
  const std::string region_report = (dir / "region_input.json").string();
  struct Case {
    std::string command, config, extra;
  };
  const std::vector<Case> cases{
      {"region", "region_bilinear.json", ""},
      {"eval", "eval_delta.json", ""},
      {"search", "search.json", ""},
      {"probe", "probe.json", ""},
      {"calibrate", "calibrate.json", "--set seed_range=[1,3] --set fixtures=" + quote(fixtures)},
      {"tf", "tf.json", "--set seed_range=[1,2] --set fixtures=" + quote(fixtures)},
      {"report", "report.json", "--set inputs='[\"" + region_report + "\"]'"},
  };
  for (const auto& c : cases) {
    std::vector<std::string> outputs;
    bool ran = true;
    int k = 0;
    for (int threads : {1, 1, 4, 4}) {
      fs::path out = dir / (c.command + "_" + std::to_string(k++));
      fs::remove_all(out);
      int code = run("MAXAVG_THREADS=" + std::to_string(threads) + " " + quote(opt.cli) + " " + c.command +
                     " --config " + quote(opt.configs + "/" + c.config) + " " + c.extra + " --out " +
                     quote(out.string()) + " > /dev/null 2>&1");
      if (code != 0) ran = false;
      std::string bytes = slurp(out / "report.json") + "\n--\n" + slurp(out / "report.csv");
      if (fs::exists(out / "grid.csv")) bytes += "\n--\n" + slurp(out / "grid.csv");
      outputs.push_back(bytes);
      if (c.command == "region" && k == 1) fs::copy_file(out / "report.json", region_report, fs::copy_options::overwrite_existing);
    }
    bool same = std::all_of(outputs.begin(), outputs.end(), [&](const std::string& s) { return s == outputs[0]; });
    o.detail << " " << c.command << (same && ran ? " ok" : " DIFFERS");
    o.require(ran, c.command + " exits 0");
    o.require(same, c.command + " byte-identical across runs and thread counts");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string which = "all";
  Options opt;
  app.add_option("--criterion", which, "1-8 or all");
  app.add_option("--cli", opt.cli, "path to the maxavg binary");
  app.add_option("--configs", opt.configs, "config directory");
  app.add_option("--workdir", opt.workdir, "scratch directory")->default_val("acceptance_work");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(opt.workdir);

  const std::vector<std::pair<std::string, std::function<Outcome(const Options&)>>> criteria{
      {"region examples reproduce exactly", criterion_region},
      {"bilinear H_A grid matches a+b < 3/2", criterion_grid},
      {"maximal operator equals brute force, diagonal domination", criterion_maximal},
      {"ergodic exactness and probe monotonicity", criterion_ergodic},
      {"tree selection postconditions", criterion_split},
      {"forest BMO and counting function", criterion_forest},
      {"calibrated inequality suite on fresh seeds", criterion_calibrated},
      {"byte-identical reports", criterion_determinism},
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (which != "all" && which != std::to_string(k + 1)) continue;
    if ((k == 0 || k >= 6) && opt.cli.empty()) {
      std::cerr << "criterion " << k + 1 << " needs --cli and --configs\n";
      return 2;
    }
    Outcome r;
    try {
      r = criteria[k].second(opt);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail << " exception: " << e.what();
    }
    std::cout << "criterion " << k + 1 << " " << (r.pass ? "PASS" : "FAIL") << "  " << criteria[k].first << ":"
              << r.detail.str() << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
