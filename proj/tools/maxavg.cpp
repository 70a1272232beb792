#include "commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

namespace fs = std::filesystem;
using maxavg::cli::json;

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxavg: exponent regions, discrete maximal averages and time-frequency checks"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".";
  std::vector<std::string> overrides;
  for (const auto& name : maxavg::cli::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--set", overrides, "override a config key, dotted path: key.sub=value");
    sub->add_option("--out", out_dir, "directory for report.json, report.csv, grid.csv");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }
  const std::string command = app.get_subcommands().front()->get_name();

  maxavg::cli::Output out;
  auto t0 = std::chrono::steady_clock::now();
  try {
    std::ifstream in(config_path);
    if (!in) return fail("config", "cannot read " + config_path, 2);
    json config = json::parse(in);
    for (const auto& s : overrides) maxavg::cli::apply_override(config, s);
    out = maxavg::cli::run_command(command, config);
  } catch (const maxavg::cli::ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const json::exception& e) {
    return fail("config", e.what(), 2);
  } catch (const std::invalid_argument& e) {
    return fail("config", e.what(), 2);
  } catch (const std::out_of_range& e) {
    return fail("config", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  try {
    fs::path dir(out_dir);
    for (const auto& [path, contents] : out.extra_files) maxavg::cli::write_atomic(path, contents);
    maxavg::cli::write_atomic(dir / "report.json", out.report.dump(2) + "\n");
    maxavg::cli::write_atomic(dir / "report.csv", out.csv);
    if (!out.grid_csv.empty()) maxavg::cli::write_atomic(dir / "grid.csv", out.grid_csv);
    // wall time stays out of the report so reruns compare byte for byte
    maxavg::cli::write_atomic(dir / "timing.json", json{{"command", command}, {"seconds", seconds}}.dump() + "\n");
  } catch (const std::exception& e) {
    return fail("io", e.what(), 1);
  }
  if (!out.checks_passed) return fail("check", command + ": one or more checks failed, see report.csv", 3);
  return 0;
}
