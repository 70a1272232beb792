#pragma once

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxavg::cli {

using nlohmann::json;

// Malformed or inconsistent configuration; exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  json report;
  std::string csv;
  std::string grid_csv;  // written only when non-empty
  bool checks_passed = true;
  // files the command writes besides the reports (calibrate writes the fixtures)
  std::vector<std::pair<std::filesystem::path, std::string>> extra_files;
};

const std::vector<std::string>& command_names();

// key.sub.0=value; the value is parsed as JSON and kept as a string when it is not valid JSON.
void apply_override(json& config, const std::string& assignment);

Output run_command(const std::string& name, const json& config);

// Temp file in the same directory, then rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace maxavg::cli
