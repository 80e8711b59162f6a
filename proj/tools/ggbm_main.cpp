#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ggbm/cli_pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ggbm: supervised learning on heterogeneous graphs with "
               "probability-weighted path features and case-weighted boosted trees"};
  app.require_subcommand(1);

  ggbm::cli::CliOptions options;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"generate", "Draw a random graph, assign features/labels, write a graph bundle"},
      {"train", "Fit a model on a graph bundle and write ggbm-model.json"},
      {"predict", "Score nodes of a graph bundle with a saved model"},
      {"evaluate", "Compute ROC/PR metrics from predictions.csv"},
      {"experiment", "Run the random-graph benchmark protocol and write report.csv"},
      {"importance", "Export grouped variable importance for a saved model"},
      {"hcp-prepare", "Build the provider-beneficiary graph bundles from claims data"},
  };

  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", options.config_path, "JSON config file");
    sub->add_option("--seed", options.seed, "Master seed; every random stream derives from it")
        ->check(CLI::NonNegativeNumber)
        ->each([&options](const std::string&) { options.seed_given = true; });
    sub->add_option("--workers", options.workers, "Worker threads (results are independent of N)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", options.out_dir, "Output directory");
    sub->add_option("--set", options.overrides, "Config overrides as key=value (dotted keys)");
    sub->callback([&options, name = name]() { options.command = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return ggbm::cli::execute(options);
}
