#include "ggbm/cli_pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ggbm/csv.hpp"
#include "ggbm/dataset.hpp"
#include "ggbm/experiment.hpp"
#include "ggbm/ggbm.hpp"
#include "ggbm/graph_io.hpp"
#include "ggbm/hcp.hpp"
#include "ggbm/metrics.hpp"
#include "ggbm/model_io.hpp"

namespace ggbm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("manifest: cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str());
}

namespace {

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ValidationError("config error: cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ValidationError("config error: invalid JSON in '" + path + "': " + e.what());
  }
}

void apply_override(json& config, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ValidationError("config error: override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json* at = &config;
  std::size_t start = 0;
  while (true) {
    auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ValidationError("config error: bad override key '" + key + "'");
    if (dot == std::string::npos) {
      try {
        (*at)[part] = json::parse(value);
      } catch (const json::exception&) {
        (*at)[part] = value;  // bare strings are allowed unquoted
      }
      return;
    }
    at = &(*at)[part];
    start = dot + 1;
  }
}

class ArtifactSink {
 public:
  ArtifactSink(const CliOptions& options, json config)
      : options_(options), config_(std::move(config)),
        started_(std::chrono::steady_clock::now()) {
    fs::create_directories(options.out_dir);
  }

  std::string path(const std::string& name) const {
    return (fs::path(options_.out_dir) / name).string();
  }

  void add(const std::string& name) { artifacts_.push_back(name); }

  std::string config_digest() const { return hex64(fnv1a64(config_.dump())); }

  void write_manifest() {
    json manifest;
    manifest["command"] = options_.command;
    manifest["config"] = config_;
    manifest["config_digest"] = config_digest();
    manifest["seed"] = options_.seed;
    manifest["workers"] = options_.workers;
    json arts = json::array();
    for (const auto& name : artifacts_)
      arts.push_back({{"path", name}, {"digest", hex64(file_digest(path(name)))}});
    manifest["artifacts"] = arts;
    const auto elapsed = std::chrono::steady_clock::now() - started_;
    manifest["wall_clock_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    std::ofstream out(path("manifest.json"));
    out << manifest.dump(2) << "\n";
  }

  const json& config() const { return config_; }

 private:
  const CliOptions& options_;
  json config_;
  std::vector<std::string> artifacts_;
  std::chrono::steady_clock::time_point started_;
};

MetapathSchema metapaths_from_config(const json& config, int radius) {
  if (!config.contains("metapaths") || config.at("metapaths").is_string())
    return MetapathSchema::wildcard(radius);
  return MetapathSchema::from_json_string(config.at("metapaths").dump());
}

PathLimits limits_from_config(const json& config) {
  PathLimits limits;
  if (config.contains("max_paths_per_head"))
    limits.max_paths_per_head = config.at("max_paths_per_head").get<std::size_t>();
  if (config.contains("max_egonet_nodes"))
    limits.max_egonet_nodes = config.at("max_egonet_nodes").get<std::size_t>();
  return limits;
}

std::vector<NodeId> heads_from_config(const json& config, const HinGraph& g) {
  const std::string which = config.value("nodes", "labeled");
  std::vector<NodeId> out;
  if (which == "labeled") {
    out = g.labeled_nodes();
  } else if (which == "all") {
    out.resize(g.num_nodes());
    std::iota(out.begin(), out.end(), 0);
  } else {
    throw ValidationError("config error at nodes: must be labeled|all");
  }
  return out;
}

int run_generate(const CliOptions& options, ArtifactSink& sink) {
  const json& config = sink.config();
  GraphModelParams params;
  if (config.contains("model") && config.at("model").is_object()) {
    json m = config.at("model");
    params.model = graph_model_from_name(m.at("model").get<std::string>());
    params.nodes = m.value("nodes", 200);
    params.er_p = m.value("p", params.er_p);
    params.sbm_block_sizes = m.value("block_sizes", params.sbm_block_sizes);
    params.sbm_p_in = m.value("p_in", params.sbm_p_in);
    params.sbm_p_out = m.value("p_out", params.sbm_p_out);
    params.ws_k = m.value("k", params.ws_k);
    params.ws_beta = m.value("beta", params.ws_beta);
    params.kleinberg_q = m.value("q", params.kleinberg_q);
    params.ba_m = m.value("m", params.ba_m);
  } else {
    params = GraphModelParams::defaults_for(
        graph_model_from_name(config.value("model", "erdos_renyi")), config.value("nodes", 200), 0);
  }
  params.seed = derive_seed(options.seed, "generate/graph");
  HinGraph g = generate(params);
  g = assign_features(g, derive_seed(options.seed, "generate/features"));

  if (config.contains("labels")) {
    const json& lj = config.at("labels");
    ScenarioConfig scenario;
    scenario.scenario = lj.value("scenario", 1);
    scenario.radius = lj.value("n", 2);
    if (lj.contains("agg")) scenario.agg = path_agg_from_name(lj.at("agg").get<std::string>());
    scenario.fraud_rate = lj.value("fraud_rate", scenario.fraud_rate);
    g = g.relabeled(scenario_labels(g, scenario));
  }

  const std::string bundle = config.value("bundle_dir", "graph");
  save_graph_bundle(g, sink.path(bundle));
  sink.add(bundle + "/schema.json");
  for (const auto& t : g.schema().node_types()) sink.add(bundle + "/nodes." + t.name + ".csv");
  for (const auto& t : g.schema().edge_types()) sink.add(bundle + "/edges." + t.name + ".csv");
  return 0;
}

int run_train(const CliOptions& options, ArtifactSink& sink) {
  const json& config = sink.config();
  if (!config.contains("graph"))
    throw ValidationError("config error at graph: missing graph bundle directory");
  HinGraph g = load_graph_bundle(config.at("graph").get<std::string>());
  const int radius = config.value("n", 2);
  TrainConfig train_cfg;
  if (config.contains("train")) {
    ExperimentConfig tmp;  // reuse the train-config parser
    json wrapper;
    wrapper["models"] = json::array({"erdos_renyi"});
    wrapper["ggbm"] = config.at("train");
    tmp = experiment_config_from_json_string(wrapper.dump());
    train_cfg = tmp.train;
  }
  train_cfg.seed = derive_seed(options.seed, "train");
  train_cfg.validate();

  auto heads = heads_from_config(config, g);
  if (heads.empty()) throw ValidationError("train: graph has no labeled nodes");
  MetapathSchema schema = metapaths_from_config(config, radius);
  PathLimits limits = limits_from_config(config);

  GgbmModel model = fit_ggbm(g, heads, schema, radius, train_cfg, limits, options.workers);
  model.threshold = config.value("psi", 0.5);
  if (!(model.threshold > 0.0 && model.threshold < 1.0))
    throw ValidationError("config error at psi: must be in (0,1)");
  model.save(sink.path("ggbm-model.json"));
  sink.add("ggbm-model.json");

  if (config.value("export_dataset", false) || config.value("export_paths", false)) {
    PathDataset ds = build_dataset(g, heads, radius, schema, limits, options.workers);
    if (config.value("export_dataset", false)) {
      dataset_to_csv(ds, g, sink.path("dataset.csv"));
      sink.add("dataset.csv");
    }
    if (config.value("export_paths", false)) {
      paths_to_csv(ds, g, sink.path("paths.csv"));
      sink.add("paths.csv");
    }
  }
  return 0;
}

int run_predict(const CliOptions& options, ArtifactSink& sink) {
  const json& config = sink.config();
  if (!config.contains("graph"))
    throw ValidationError("config error at graph: missing graph bundle directory");
  if (!config.contains("model"))
    throw ValidationError("config error at model: missing model path");
  HinGraph g = load_graph_bundle(config.at("graph").get<std::string>());
  GgbmModel model = GgbmModel::load(config.at("model").get<std::string>());
  PathLimits limits = limits_from_config(config);

  auto nodes = heads_from_config(config, g);
  if (nodes.empty()) throw ValidationError("predict: no nodes selected");
  VecD scores = predict_nodes(model, g, nodes, limits, options.workers);

  CsvWriter out(sink.path("predictions.csv"));
  out.comment("config_digest=" + sink.config_digest());
  bool any_label = false;
  for (NodeId v : nodes) any_label = any_label || g.has_label(v);
  out.row(any_label ? std::vector<std::string>{"node_id", "score", "label"}
                    : std::vector<std::string>{"node_id", "score"});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::vector<std::string> row{g.external_id(nodes[i]),
                                 format_double(scores(static_cast<Eigen::Index>(i)))};
    if (any_label)
      row.push_back(g.has_label(nodes[i]) ? std::to_string(*g.label(nodes[i])) : "");
    out.row(row);
  }
  out.close();
  sink.add("predictions.csv");
  return 0;
}

int run_evaluate(const CliOptions&, ArtifactSink& sink) {
  const json& config = sink.config();
  if (!config.contains("predictions"))
    throw ValidationError("config error at predictions: missing predictions.csv path");
  CsvTable table = read_csv(config.at("predictions").get<std::string>());
  const int score_col = table.column("score");
  const int label_col = table.column("label");
  if (score_col < 0) throw ValidationError("evaluate: predictions file has no score column");
  if (label_col < 0) throw ValidationError("evaluate: predictions file has no label column");

  std::vector<double> scores;
  std::vector<int> labels;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r][label_col].empty()) continue;
    const std::string where = "predictions:" + std::to_string(table.line_numbers[r]);
    scores.push_back(parse_double(table.rows[r][score_col], where));
    labels.push_back(static_cast<int>(parse_double(table.rows[r][label_col], where)));
  }

  RocCurve curve = roc_curve(scores, labels);
  const double pr = pr_auc(scores, labels);
  int pos = 0;
  for (int y : labels) pos += y;

  json metrics;
  metrics["roc_auc"] = curve.auc;
  metrics["pr_auc"] = pr;
  metrics["n_pos"] = pos;
  metrics["n_neg"] = static_cast<int>(labels.size()) - pos;
  metrics["config_digest"] = sink.config_digest();
  {
    std::ofstream out(sink.path("metrics.json"));
    out << metrics.dump(2) << "\n";
  }
  sink.add("metrics.json");

  CsvWriter roc(sink.path("roc.csv"));
  roc.comment("config_digest=" + sink.config_digest());
  roc.row({"fpr", "tpr"});
  for (std::size_t i = 0; i < curve.fpr.size(); ++i)
    roc.row({format_double(curve.fpr[i]), format_double(curve.tpr[i])});
  roc.close();
  sink.add("roc.csv");
  return 0;
}

int run_experiment_cmd(const CliOptions& options, ArtifactSink& sink) {
  ExperimentConfig cfg = experiment_config_from_json_string(sink.config().dump());
  if (options.seed_given) cfg.seed = options.seed;
  ExperimentReport report = run_experiment(cfg, options.workers);

  report_to_csv(report, sink.path("report.csv"), sink.config_digest());
  sink.add("report.csv");
  {
    std::ofstream out(sink.path("report.json"));
    out << report_to_json_string(report) << "\n";
  }
  sink.add("report.json");
  for (const auto& cell : report.cells)
    for (const auto& w : cell.warnings)
      std::cerr << "warning: " << cell.model_name << ": " << w << "\n";
  return 0;
}

int run_importance(const CliOptions& options, ArtifactSink& sink) {
  const json& config = sink.config();
  if (!config.contains("model"))
    throw ValidationError("config error at model: missing model path");
  GgbmModel model = GgbmModel::load(config.at("model").get<std::string>());

  GroupedImportance imp;
  if (config.contains("graph")) {
    HinGraph g = load_graph_bundle(config.at("graph").get<std::string>());
    auto heads = heads_from_config(config, g);
    PathDataset ds = build_dataset(g, heads, model.radius, model.metapaths,
                                   limits_from_config(config), options.workers);
    imp = importance_grouped(model, &ds, derive_seed(options.seed, "importance"),
                             config.value("repeats", 3));
  } else {
    imp = importance_grouped(model);
  }

  CsvWriter out(sink.path("importance.csv"));
  out.comment("config_digest=" + sink.config_digest());
  const bool with_perm = !imp.columns.empty() && imp.columns.front().has_permutation;
  std::vector<std::string> header{"column", "slot", "level", "type", "feature", "gain"};
  if (with_perm) header.push_back("permutation");
  out.row(header);
  for (const auto& e : imp.columns) {
    std::vector<std::string> row{e.column,      e.slot,           std::to_string(e.level),
                                 e.type_name,   e.feature_name,   format_double(e.gain)};
    if (with_perm) row.push_back(format_double(e.permutation));
    out.row(row);
  }
  out.close();
  sink.add("importance.csv");
  return 0;
}

int run_hcp_prepare(const CliOptions& options, ArtifactSink& sink) {
  const json& config = sink.config();
  for (const char* key : {"claims", "beneficiaries", "labels"})
    if (!config.contains(key))
      throw ValidationError(std::string("config error at ") + key + ": missing file path");

  auto claims = load_claims_csv(config.at("claims").get<std::string>(),
                                config.value("amount_column", "amount_paid"));
  auto beneficiaries = load_beneficiaries_csv(config.at("beneficiaries").get<std::string>());
  auto labels = load_provider_labels_csv(config.at("labels").get<std::string>());

  HinGraph g = build_bipartite_graph(claims, beneficiaries, labels);
  CommunitySplit split = community_split(g, config.value("test_fraction", 0.3),
                                         derive_seed(options.seed, "hcp-split"));

  save_graph_bundle(split.train, sink.path("train"));
  save_graph_bundle(split.test, sink.path("test"));
  for (const std::string side : {"train", "test"}) {
    sink.add(side + "/schema.json");
    sink.add(side + "/nodes.provider.csv");
    sink.add(side + "/nodes.beneficiary.csv");
    sink.add(side + "/edges.claims.csv");
  }
  {
    std::ofstream out(sink.path("split_report.json"));
    out << split.report_json() << "\n";
  }
  sink.add("split_report.json");
  return 0;
}

}  // namespace

int execute(const CliOptions& options) {
  try {
    json config = load_config(options.config_path);
    for (const auto& o : options.overrides) apply_override(config, o);

    ArtifactSink sink(options, config);
    int rc = 0;
    if (options.command == "generate")
      rc = run_generate(options, sink);
    else if (options.command == "train")
      rc = run_train(options, sink);
    else if (options.command == "predict")
      rc = run_predict(options, sink);
    else if (options.command == "evaluate")
      rc = run_evaluate(options, sink);
    else if (options.command == "experiment")
      rc = run_experiment_cmd(options, sink);
    else if (options.command == "importance")
      rc = run_importance(options, sink);
    else if (options.command == "hcp-prepare")
      rc = run_hcp_prepare(options, sink);
    else
      throw ValidationError("unknown command '" + options.command + "'");
    if (rc == 0) sink.write_manifest();
    return rc;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ggbm::cli
