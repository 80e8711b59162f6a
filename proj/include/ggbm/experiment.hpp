#pragma once

#include <map>
#include <string>
#include <vector>

#include "ggbm/ggbm.hpp"
#include "ggbm/metrics.hpp"
#include "ggbm/randgraph.hpp"

namespace ggbm {

// Benchmark protocol: per run, three independent graphs (train/validation/
// test) are drawn from the same model, labeled by the chosen scenario; each
// method fits on train (validation drives early stopping when enabled) and is
// scored by test ROC-AUC. Methods: "ggbm" (path features at the configured
// radius) and "gbm0" (head-features-only baseline, radius 0).
struct ExperimentConfig {
  std::vector<GraphModelParams> models;
  ScenarioConfig scenario;
  int runs = 20;
  std::vector<std::string> methods = {"gbm0", "ggbm"};
  std::uint64_t seed = 0;
  TrainConfig train;
  int radius = 2;
  PathLimits limits;

  void validate() const;
};

struct MethodStats {
  std::vector<double> aucs;  // per run; NaN marks a failed run
  double mean = 0.0;
  double stddev = 0.0;
  int failures = 0;
};

struct ReportCell {
  std::string model_name;
  std::string mode_label;  // "-" for scenario 1, aggregation name for scenario 2
  std::vector<std::pair<std::string, MethodStats>> methods;
  bool has_test = false;  // Welch t-test between the first two methods
  double t_stat = 0.0;
  double p_value = 1.0;
  std::vector<std::string> warnings;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReportCell> cells;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg, int workers = 1);

// report.csv: one row per (model, mode, method) with mean, std and the
// cell's t statistic / p value.
void report_to_csv(const ExperimentReport& report, const std::string& path,
                   const std::string& config_digest);
std::string report_to_json_string(const ExperimentReport& report);

std::string experiment_config_to_json_string(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json_string(const std::string& text);

}  // namespace ggbm
