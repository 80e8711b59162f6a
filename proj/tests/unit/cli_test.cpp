#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ggbm/cli_pipeline.hpp"
#include "ggbm/csv.hpp"

using namespace ggbm;
using ggbm::cli::CliOptions;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& command, const std::string& config, const std::string& out_dir,
        std::uint64_t seed = 7, int workers = 1,
        const std::vector<std::string>& overrides = {}) {
  CliOptions options;
  options.command = command;
  options.config_path = config;
  options.out_dir = out_dir;
  options.seed = seed;
  options.seed_given = true;
  options.workers = workers;
  options.overrides = overrides;
  return ggbm::cli::execute(options);
}

}  // namespace

TEST_CASE("generate then train then predict then evaluate, radius zero") {
  TempDir dir("ggbm_cli_pipeline");
  write_file(dir.file("gen.json"),
             R"({"model": {"model": "erdos_renyi", "nodes": 60, "p": 0.05},
                 "labels": {"scenario": 1, "n": 1}})");
  REQUIRE(run("generate", dir.file("gen.json"), dir.str()) == 0);
  REQUIRE(fs::exists(dir.file("graph/schema.json")));
  REQUIRE(fs::exists(dir.file("manifest.json")));

  write_file(dir.file("train.json"),
             R"({"graph": ")" + dir.file("graph") +
                 R"(", "n": 0,
                 "train": {"num_trees": 40, "max_depth": 3}})");
  REQUIRE(run("train", dir.file("train.json"), dir.str()) == 0);
  REQUIRE(fs::exists(dir.file("ggbm-model.json")));

  write_file(dir.file("predict.json"), R"({"graph": ")" + dir.file("graph") +
                                           R"(", "model": ")" + dir.file("ggbm-model.json") +
                                           R"("})");
  REQUIRE(run("predict", dir.file("predict.json"), dir.str()) == 0);
  REQUIRE(fs::exists(dir.file("predictions.csv")));

  write_file(dir.file("eval.json"), R"({"predictions": ")" + dir.file("predictions.csv") + R"("})");
  REQUIRE(run("evaluate", dir.file("eval.json"), dir.str()) == 0);
  json metrics = json::parse(read_file(dir.file("metrics.json")));
  CHECK(metrics.contains("roc_auc"));
  CHECK(metrics["n_pos"].get<int>() == 6);  // floor(0.1 * 60)
  CHECK(metrics["roc_auc"].get<double>() > 0.5);
  REQUIRE(fs::exists(dir.file("roc.csv")));

  // manifest digests match the bytes on disk
  json manifest = json::parse(read_file(dir.file("manifest.json")));
  for (const auto& artifact : manifest["artifacts"]) {
    const std::string rel = artifact["path"].get<std::string>();
    CHECK(artifact["digest"].get<std::string>() ==
          hex64(ggbm::cli::file_digest(dir.file(rel))));
  }
}

TEST_CASE("experiment smoke run writes one report row per model and method") {
  TempDir dir("ggbm_cli_experiment");
  write_file(dir.file("exp.json"),
             R"({"models": [{"model": "erdos_renyi", "nodes": 40, "p": 0.08}],
                 "scenario": 1, "runs": 2, "n": 1, "seed": 3,
                 "methods": ["gbm0", "ggbm"],
                 "ggbm": {"num_trees": 20, "max_depth": 3}})");
  REQUIRE(run("experiment", dir.file("exp.json"), dir.str()) == 0);
  CsvTable report = read_csv(dir.file("report.csv"));
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0][0] == "erdos_renyi");
  CHECK(report.rows[0][2] == "gbm0");
  CHECK(report.rows[1][2] == "ggbm");
  CHECK(fs::exists(dir.file("report.json")));
}

TEST_CASE("experiment reports are byte-identical across worker counts") {
  TempDir dir1("ggbm_cli_workers1");
  TempDir dir2("ggbm_cli_workers2");
  const std::string config =
      R"({"models": [{"model": "erdos_renyi", "nodes": 40, "p": 0.08},
                     {"model": "watts_strogatz", "nodes": 40, "k": 4, "beta": 0.1}],
          "scenario": 1, "runs": 2, "n": 1, "seed": 11,
          "ggbm": {"num_trees": 15, "max_depth": 3}})";
  write_file(dir1.file("exp.json"), config);
  write_file(dir2.file("exp.json"), config);
  REQUIRE(run("experiment", dir1.file("exp.json"), dir1.str(), 11, 1) == 0);
  REQUIRE(run("experiment", dir2.file("exp.json"), dir2.str(), 11, 4) == 0);
  CHECK(read_file(dir1.file("report.csv")) == read_file(dir2.file("report.csv")));
}

TEST_CASE("malformed config exits with code 1 and a field message") {
  TempDir dir("ggbm_cli_badcfg");
  write_file(dir.file("gen.json"),
             R"({"model": {"model": "erdos_renyi", "nodes": 20, "p": 0.1},
                 "labels": {"scenario": 1, "n": 1}})");
  REQUIRE(run("generate", dir.file("gen.json"), dir.str()) == 0);
  write_file(dir.file("train.json"), R"({"graph": ")" + dir.file("graph") +
                                         R"(", "n": 0, "train": {"learning_rate": -2}})");
  CHECK(run("train", dir.file("train.json"), dir.str()) == 1);

  write_file(dir.file("exp.json"), R"({"models": ["erdos_renyi"], "runs": 1})");
  CHECK(run("experiment", dir.file("exp.json"), dir.str()) == 1);  // runs < 2

  CHECK(run("nope", "", dir.str()) == 1);
}

TEST_CASE("evaluate requires a label column") {
  TempDir dir("ggbm_cli_nolabel");
  write_file(dir.file("predictions.csv"), "node_id,score\nv1,0.4\nv2,0.9\n");
  write_file(dir.file("eval.json"), R"({"predictions": ")" + dir.file("predictions.csv") + R"("})");
  CHECK(run("evaluate", dir.file("eval.json"), dir.str()) == 1);
}

TEST_CASE("config overrides reach into nested keys") {
  TempDir dir("ggbm_cli_override");
  write_file(dir.file("gen.json"), R"({"model": {"model": "erdos_renyi", "nodes": 30, "p": 1.0}})");
  REQUIRE(run("generate", dir.file("gen.json"), dir.str(), 7, 1, {"model.p=0.0"}) == 0);
  CsvTable edges = read_csv(dir.file("graph/edges.link.csv"));
  CHECK(edges.rows.empty());
}

TEST_CASE("train exports dataset and path debug tables on request") {
  TempDir dir("ggbm_cli_exports");
  write_file(dir.file("gen.json"),
             R"({"model": {"model": "barabasi_albert", "nodes": 30, "m": 1},
                 "labels": {"scenario": 1, "n": 1}})");
  REQUIRE(run("generate", dir.file("gen.json"), dir.str()) == 0);
  write_file(dir.file("train.json"),
             R"({"graph": ")" + dir.file("graph") +
                 R"(", "n": 2, "export_dataset": true, "export_paths": true,
                 "train": {"num_trees": 10}})");
  REQUIRE(run("train", dir.file("train.json"), dir.str()) == 0);

  CsvTable paths = read_csv(dir.file("paths.csv"));
  REQUIRE(paths.header ==
          std::vector<std::string>{"head_id", "path_nodes", "path_edges", "weight"});
  CHECK(paths.rows.size() >= 30);

  CsvTable ds = read_csv(dir.file("dataset.csv"));
  CHECK(ds.header.size() >= 4);
  CHECK(ds.header[ds.header.size() - 3] == "__head");
  CHECK(ds.header.back() == "__label");
}

TEST_CASE("hcp-prepare builds disjoint bundles and a split report") {
  TempDir dir("ggbm_cli_hcp");
  {
    std::ofstream claims(dir.file("claims.csv"));
    claims << "claim_id,provider_id,beneficiary_id,amount_paid\n";
    int cid = 0;
    for (int gix = 0; gix < 5; ++gix)
      for (int p = 0; p < 2; ++p)
        for (int b = 0; b < 3; ++b)
          claims << "c" << cid++ << ",P" << gix << "_" << p << ",B" << gix << "_" << b << ","
                 << (100 + 7 * p + b) << ".25\n";
    std::ofstream bene(dir.file("beneficiaries.csv"));
    bene << "beneficiary_id,age\n";
    for (int gix = 0; gix < 5; ++gix)
      for (int b = 0; b < 3; ++b) bene << "B" << gix << "_" << b << "," << (30 + b) << "\n";
    std::ofstream labels(dir.file("labels.csv"));
    labels << "provider_id,label\n";
    for (int gix = 0; gix < 5; ++gix)
      for (int p = 0; p < 2; ++p) labels << "P" << gix << "_" << p << "," << (p % 2) << "\n";
  }
  write_file(dir.file("hcp.json"), R"({"claims": ")" + dir.file("claims.csv") +
                                       R"(", "beneficiaries": ")" + dir.file("beneficiaries.csv") +
                                       R"(", "labels": ")" + dir.file("labels.csv") +
                                       R"(", "test_fraction": 0.4})");
  REQUIRE(run("hcp-prepare", dir.file("hcp.json"), dir.str()) == 0);
  REQUIRE(fs::exists(dir.file("train/schema.json")));
  REQUIRE(fs::exists(dir.file("test/schema.json")));
  json report = json::parse(read_file(dir.file("split_report.json")));
  CHECK(report["dropped_edges"].get<int>() == 0);
  CHECK(report["train_nodes"].get<int>() + report["test_nodes"].get<int>() == 25);
}
