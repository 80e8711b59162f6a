#pragma once

#include <string>
#include <vector>

#include "ggbm/types.hpp"

namespace ggbm::cli {

struct CliOptions {
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;  // key=value, dotted key paths
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
  std::string out_dir = ".";
};

// Runs one subcommand end to end and writes its artifacts plus manifest.json
// under out_dir. Returns 0 on success, 1 on validation/config errors, 2 on
// runtime failure.
int execute(const CliOptions& options);

std::uint64_t file_digest(const std::string& path);

}  // namespace ggbm::cli
