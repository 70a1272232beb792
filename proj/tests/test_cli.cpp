#include <doctest.h>

#include "commands.hpp"
#include "maxavg/json_io.hpp"

#include <filesystem>
#include <fstream>

using namespace maxavg;
using maxavg::cli::json;

TEST_CASE("matrix and exponent JSON") {
  AveragingMatrix a = matrix_from_json(json::parse(R"({"rows": 2, "cols": 1, "entries": [["1"], [2]]})"));
  CHECK(a.rows == 2);
  CHECK(a.entries[1][0] == 2);
  CHECK(matrix_from_json(to_json(a)).entries == a.entries);
  CHECK_THROWS(matrix_from_json(json::parse(R"({"rows": 3, "entries": [["1"], ["2"]]})")));
  CHECK_THROWS(matrix_from_json(json::parse(R"({"entries": [["1"], ["2", "3"]]})")));
  CHECK_THROWS(rational_from_json(json(0.5)));

  ExponentTuple x = exponents_from_json(json::parse(R"(["1/2", "0.25"])"));
  CHECK(x.reciprocals[1] == frac(1, 4));
  CHECK(to_json(x) == json::parse(R"(["1/2", "1/4"])"));
}

TEST_CASE("signals from JSON and text") {
  Signal s = signal_from_json(json::parse(R"({"start": -1, "values": [1, 2, 3]})"));
  CHECK(s.start == -1);
  CHECK(s.at(1) == 3);
  Signal t = parse_signal_text("# index value\n5 1.5\n2 -1  # trailing\n");
  CHECK(t.start == 2);
  CHECK(t.at(5) == 1.5);
  CHECK(t.at(3) == 0);
  CHECK(parse_signal_text("").empty());
  CHECK_THROWS(parse_signal_text("3"));
  CHECK_THROWS(parse_signal_text("x 1"));
}

TEST_CASE("doubles keep 17 significant digits") {
  CHECK(format_double(1.0 / 3) == "0.33333333333333331");
  CHECK(std::stod(format_double(0.1)) == 0.1);
}

TEST_CASE("dotted overrides") {
  json c = json::parse(R"({"grid": {"step": "1/50", "axes": [0, 1]}, "seed": 1})");
  cli::apply_override(c, "seed=9");
  cli::apply_override(c, "grid.step=1/10");
  cli::apply_override(c, "grid.axes.1=2");
  cli::apply_override(c, "new.key=[1,2]");
  CHECK(c["seed"] == 9);
  CHECK(c["grid"]["step"] == "1/10");
  CHECK(c["grid"]["axes"][1] == 2);
  CHECK(c["new"]["key"] == json::array({1, 2}));
  CHECK_THROWS_AS(cli::apply_override(c, "noequals"), cli::ConfigError);
  CHECK_THROWS_AS(cli::apply_override(c, "grid.axes.7=1"), cli::ConfigError);
  CHECK_THROWS_AS(cli::apply_override(c, "seed.x=1"), cli::ConfigError);
}

TEST_CASE("region command") {
  cli::Output sq = cli::run_command("region", json::parse(R"({"preset": "squares"})"));
  const json& r = sq.report["result"];
  CHECK(r["k"] == 1);
  CHECK(r["threshold"] == "5/2");
  CHECK(r["rank_star"] == 2);
  CHECK(r["rank_star_extended"] == 3);
  CHECK(r["points"].empty());
  CHECK(sq.grid_csv.empty());

  cli::Output b = cli::run_command(
      "region", json::parse(R"({"preset": "bilinear", "resolution": 16, "grid": {"step": "1/4"}, "epsilon": "1/8"})"));
  CHECK(b.report["result"]["vertex_sets"][0]["vertices"].size() == 7);
  CHECK(b.report["result"]["grid"]["points"] == 16);
  CHECK_THROWS_AS(cli::run_command("region", json::parse(R"({"preset": "cubic"})")), cli::ConfigError);
  CHECK_THROWS_AS(cli::run_command("region", json::parse(R"({})")), cli::ConfigError);
}

TEST_CASE("eval command on deltas") {
  cli::Output e = cli::run_command(
      "eval", json::parse(R"({"preset": "bilinear", "signals": [{"start": 0, "values": [1]}, {"start": 0, "values": [1]}],
                              "window": {"lo": -1, "hi": 1}})"));
  CHECK(e.csv == "x,value,argmax_n\n-1,0,1\n0,0.33333333333333331,1\n1,0,1\n");
}

TEST_CASE("empty tf instance") {
  cli::Output t = cli::run_command("tf", json::parse(R"({"instance": {"multitiles": []}})"));
  CHECK(t.checks_passed);
  CHECK(t.report["result"]["tiles"] == 0);
}

TEST_CASE("fixture problems are config errors") {
  auto dir = std::filesystem::temp_directory_path() / "maxavg_cli_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "constants.json";
  std::ofstream(path) << R"({"version": 999})";
  json cfg = {{"checks", {"inequalities"}}, {"fixtures", path.string()}};
  CHECK_THROWS_AS(cli::run_command("tf", cfg), cli::ConfigError);
  cfg["fixtures"] = (dir / "missing.json").string();
  CHECK_THROWS_AS(cli::run_command("tf", cfg), cli::ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("atomic writes replace the target") {
  auto dir = std::filesystem::temp_directory_path() / "maxavg_atomic_test";
  cli::write_atomic(dir / "a.txt", "one");
  cli::write_atomic(dir / "a.txt", "two");
  std::ifstream in(dir / "a.txt");
  std::string s;
  in >> s;
  CHECK(s == "two");
  std::size_t files = 0;
  for (auto& e : std::filesystem::directory_iterator(dir)) files += e.is_regular_file();
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}
