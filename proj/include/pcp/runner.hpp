#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pcp/config.hpp"

namespace pcp {

struct RunOutput {
  nlohmann::json manifest;
  // (file name, file contents); written next to the manifest by run_and_write
  std::vector<std::pair<std::string, std::string>> csv_files;
  bool ok = true;  // all in-run criteria passed
};

// Executes one subcommand purely in memory (no file IO, no wall-clock data:
// two calls with the same config must produce identical output).
RunOutput run_subcommand(const ExperimentConfig& cfg, const std::string& sub,
                         bool quick);

// Runs, then writes <out_dir>/manifest.json, the CSV tables, and SCHEMA.md.
// Returns the process exit code: 0 iff every in-run criterion passed.
int run_and_write(const ExperimentConfig& cfg, const std::string& sub,
                  bool quick, int threads);

// Floats in CSV tables carry 17 significant digits (round-trip exact).
std::string format_sig17(double v);

std::string schema_text();

}  // namespace pcp
