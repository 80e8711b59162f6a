#include "ggbm/experiment.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "ggbm/csv.hpp"

namespace ggbm {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (models.empty()) throw ValidationError("experiment: models must be non-empty");
  for (const auto& m : models) m.validate();
  scenario.validate();
  if (runs < 2) throw ValidationError("experiment: runs must be >= 2");
  if (methods.empty()) throw ValidationError("experiment: methods must be non-empty");
  for (const auto& m : methods)
    if (m != "ggbm" && m != "gbm0")
      throw ValidationError("experiment: unknown method '" + m + "'");
  if (radius < 0) throw ValidationError("experiment: radius must be >= 0");
  train.validate();
}

namespace {

struct LabeledGraph {
  HinGraph graph;
  std::vector<NodeId> nodes;
};

LabeledGraph make_graph(const ExperimentConfig& cfg, const GraphModelParams& base,
                        const std::string& role, int run) {
  const std::string tag = graph_model_name(base.model) + "/" + role + "/" + std::to_string(run);
  GraphModelParams params = base;
  params.seed = derive_seed(cfg.seed, tag + "/graph");
  HinGraph g = generate(params);
  g = assign_features(g, derive_seed(cfg.seed, tag + "/features"));
  auto labels = scenario_labels(g, cfg.scenario);
  g = g.relabeled(labels);
  LabeledGraph out{std::move(g), {}};
  out.nodes.resize(out.graph.num_nodes());
  std::iota(out.nodes.begin(), out.nodes.end(), 0);
  return out;
}

double run_method(const ExperimentConfig& cfg, const std::string& method,
                  const LabeledGraph& train, const LabeledGraph& val, const LabeledGraph& test,
                  std::uint64_t method_seed) {
  const int radius = method == "gbm0" ? 0 : cfg.radius;
  TrainConfig train_cfg = cfg.train;
  train_cfg.seed = method_seed;
  const MetapathSchema schema = MetapathSchema::wildcard(radius);
  const bool use_val = train_cfg.early_stopping_rounds > 0;
  GgbmModel model =
      fit_ggbm(train.graph, train.nodes, schema, radius, train_cfg, cfg.limits, 1,
               use_val ? &val.graph : nullptr,
               use_val ? std::span<const NodeId>(val.nodes) : std::span<const NodeId>());

  VecD scores = predict_nodes(model, test.graph, test.nodes, cfg.limits, 1);
  std::vector<double> s(scores.data(), scores.data() + scores.size());
  std::vector<int> y;
  y.reserve(test.nodes.size());
  for (NodeId v : test.nodes) y.push_back(*test.graph.label(v));
  return roc_auc(s, y);
}

void summarize(MethodStats& stats) {
  double sum = 0.0;
  int n = 0;
  for (double a : stats.aucs) {
    if (std::isnan(a)) {
      ++stats.failures;
      continue;
    }
    sum += a;
    ++n;
  }
  stats.mean = n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
  double var = 0.0;
  for (double a : stats.aucs)
    if (!std::isnan(a)) var += (a - stats.mean) * (a - stats.mean);
  stats.stddev = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, int workers) {
  cfg.validate();

  ExperimentReport report;
  report.config = cfg;
  report.cells.resize(cfg.models.size());
  for (std::size_t c = 0; c < cfg.models.size(); ++c) {
    report.cells[c].model_name = graph_model_name(cfg.models[c].model);
    report.cells[c].mode_label = cfg.scenario.scenario == 2 ? path_agg_name(cfg.scenario.agg) : "-";
    for (const auto& m : cfg.methods) {
      MethodStats stats;
      stats.aucs.assign(cfg.runs, std::numeric_limits<double>::quiet_NaN());
      report.cells[c].methods.emplace_back(m, std::move(stats));
    }
  }

  struct Task {
    std::size_t cell;
    int run;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cfg.models.size(); ++c)
    for (int r = 0; r < cfg.runs; ++r) tasks.push_back({c, r});

  std::vector<std::vector<std::string>> task_warnings(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker_fn = [&]() {
    while (true) {
      std::size_t ti = next.fetch_add(1);
      if (ti >= tasks.size()) break;
      const Task task = tasks[ti];
      const GraphModelParams& params = cfg.models[task.cell];
      try {
        LabeledGraph train_g = make_graph(cfg, params, "train", task.run);
        LabeledGraph val_g = make_graph(cfg, params, "val", task.run);
        LabeledGraph test_g = make_graph(cfg, params, "test", task.run);
        for (auto& [name, stats] : report.cells[task.cell].methods) {
          const std::uint64_t method_seed = derive_seed(
              cfg.seed, graph_model_name(params.model) + "/" + name + "/" + std::to_string(task.run));
          try {
            stats.aucs[task.run] = run_method(cfg, name, train_g, val_g, test_g, method_seed);
          } catch (const std::exception& e) {
            task_warnings[ti].push_back("run " + std::to_string(task.run) + " method " + name +
                                        " failed: " + e.what());
          }
        }
      } catch (const std::exception& e) {
        task_warnings[ti].push_back("run " + std::to_string(task.run) +
                                    " graph generation failed: " + e.what());
      }
    }
  };

  const int n_workers = std::max(1, workers);
  if (n_workers == 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker_fn);
    for (auto& t : pool) t.join();
  }

  for (std::size_t ti = 0; ti < tasks.size(); ++ti)
    for (auto& w : task_warnings[ti])
      report.cells[tasks[ti].cell].warnings.push_back(std::move(w));

  for (auto& cell : report.cells) {
    for (auto& [name, stats] : cell.methods) summarize(stats);
    if (cell.methods.size() >= 2) {
      // pairwise-complete runs only
      std::vector<double> a, b;
      for (int r = 0; r < cfg.runs; ++r) {
        const double va = cell.methods[0].second.aucs[r];
        const double vb = cell.methods[1].second.aucs[r];
        if (!std::isnan(va) && !std::isnan(vb)) {
          a.push_back(va);
          b.push_back(vb);
        }
      }
      if (a.size() != static_cast<std::size_t>(cfg.runs))
        cell.warnings.push_back("t-test uses " + std::to_string(a.size()) + " of " +
                                std::to_string(cfg.runs) + " runs (failures excluded)");
      if (a.size() >= 2) {
        try {
          WelchResult res = welch_t_test(a, b);
          cell.t_stat = res.t;
          cell.p_value = res.p;
          cell.has_test = true;
        } catch (const std::exception& e) {
          cell.warnings.push_back(std::string("t-test failed: ") + e.what());
        }
      }
    }
  }
  return report;
}

void report_to_csv(const ExperimentReport& report, const std::string& path,
                   const std::string& config_digest) {
  CsvWriter out(path);
  if (!config_digest.empty()) out.comment("config_digest=" + config_digest);
  out.row({"model", "mode", "method", "mean", "std", "t_stat", "p_value"});
  for (const auto& cell : report.cells) {
    for (const auto& [name, stats] : cell.methods) {
      out.row({cell.model_name, cell.mode_label, name, format_double(stats.mean),
               format_double(stats.stddev), cell.has_test ? format_double(cell.t_stat) : "",
               cell.has_test ? format_double(cell.p_value) : ""});
    }
  }
}

namespace {

json model_params_to_json(const GraphModelParams& p) {
  json j;
  j["model"] = graph_model_name(p.model);
  j["nodes"] = p.nodes;
  switch (p.model) {
    case GraphModel::ErdosRenyi: j["p"] = p.er_p; break;
    case GraphModel::StochasticBlock:
      j["block_sizes"] = p.sbm_block_sizes;
      j["p_in"] = p.sbm_p_in;
      j["p_out"] = p.sbm_p_out;
      break;
    case GraphModel::WattsStrogatz:
      j["k"] = p.ws_k;
      j["beta"] = p.ws_beta;
      break;
    case GraphModel::Kleinberg: j["q"] = p.kleinberg_q; break;
    case GraphModel::BarabasiAlbert:
    case GraphModel::BianconiBarabasi: j["m"] = p.ba_m; break;
  }
  return j;
}

GraphModelParams model_params_from_json(const json& j) {
  GraphModelParams p;
  if (j.is_string()) {
    p = GraphModelParams::defaults_for(graph_model_from_name(j.get<std::string>()), 200, 0);
    return p;
  }
  p.model = graph_model_from_name(j.at("model").get<std::string>());
  p.nodes = j.value("nodes", 200);
  p.er_p = j.value("p", p.er_p);
  p.sbm_block_sizes = j.value("block_sizes", p.sbm_block_sizes);
  p.sbm_p_in = j.value("p_in", p.sbm_p_in);
  p.sbm_p_out = j.value("p_out", p.sbm_p_out);
  p.ws_k = j.value("k", p.ws_k);
  p.ws_beta = j.value("beta", p.ws_beta);
  p.kleinberg_q = j.value("q", p.kleinberg_q);
  p.ba_m = j.value("m", p.ba_m);
  return p;
}

json train_config_to_json(const TrainConfig& cfg) {
  return json{{"mode", cfg.mode == TrainMode::Boosted ? "boosted" : "gini_tree"},
              {"num_trees", cfg.num_trees},
              {"learning_rate", cfg.learning_rate},
              {"max_depth", cfg.max_depth},
              {"min_child_weight", cfg.min_child_weight},
              {"lambda_l2", cfg.lambda_l2},
              {"feature_subsample", cfg.feature_subsample},
              {"row_subsample", cfg.row_subsample},
              {"early_stopping_rounds", cfg.early_stopping_rounds},
              {"positive_class_weight", cfg.positive_class_weight}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig cfg;
  if (j.is_null()) return cfg;
  const std::string mode = j.value("mode", "boosted");
  if (mode == "boosted")
    cfg.mode = TrainMode::Boosted;
  else if (mode == "gini_tree")
    cfg.mode = TrainMode::GiniTree;
  else
    throw ValidationError("config error at train.mode: must be boosted|gini_tree");
  cfg.num_trees = j.value("num_trees", cfg.num_trees);
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.max_depth = j.value("max_depth", cfg.max_depth);
  cfg.min_child_weight = j.value("min_child_weight", cfg.min_child_weight);
  cfg.lambda_l2 = j.value("lambda_l2", cfg.lambda_l2);
  cfg.feature_subsample = j.value("feature_subsample", cfg.feature_subsample);
  cfg.row_subsample = j.value("row_subsample", cfg.row_subsample);
  cfg.early_stopping_rounds = j.value("early_stopping_rounds", cfg.early_stopping_rounds);
  cfg.positive_class_weight = j.value("positive_class_weight", cfg.positive_class_weight);
  return cfg;
}

}  // namespace

std::string experiment_config_to_json_string(const ExperimentConfig& cfg) {
  json j;
  j["models"] = json::array();
  for (const auto& m : cfg.models) j["models"].push_back(model_params_to_json(m));
  j["scenario"] = cfg.scenario.scenario;
  j["agg"] = path_agg_name(cfg.scenario.agg);
  j["fraud_rate"] = cfg.scenario.fraud_rate;
  j["runs"] = cfg.runs;
  j["methods"] = cfg.methods;
  j["seed"] = cfg.seed;
  j["n"] = cfg.radius;
  j["ggbm"] = train_config_to_json(cfg.train);
  return j.dump(2);
}

ExperimentConfig experiment_config_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("experiment config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.models.clear();
  for (const auto& m : j.value("models", json::array()))
    cfg.models.push_back(model_params_from_json(m));
  cfg.scenario.scenario = j.value("scenario", 1);
  if (j.contains("agg")) cfg.scenario.agg = path_agg_from_name(j.at("agg").get<std::string>());
  cfg.scenario.fraud_rate = j.value("fraud_rate", cfg.scenario.fraud_rate);
  cfg.runs = j.value("runs", cfg.runs);
  if (j.contains("methods")) cfg.methods = j.at("methods").get<std::vector<std::string>>();
  cfg.seed = j.value("seed", cfg.seed);
  cfg.radius = j.value("n", cfg.radius);
  cfg.scenario.radius = cfg.radius;
  cfg.train = train_config_from_json(j.contains("ggbm") ? j.at("ggbm") : json());
  return cfg;
}

std::string report_to_json_string(const ExperimentReport& report) {
  json j;
  j["config"] = json::parse(experiment_config_to_json_string(report.config));
  j["cells"] = json::array();
  for (const auto& cell : report.cells) {
    json c;
    c["model"] = cell.model_name;
    c["mode"] = cell.mode_label;
    c["methods"] = json::object();
    for (const auto& [name, stats] : cell.methods) {
      json m;
      m["aucs"] = json::array();
      for (double a : stats.aucs)
        m["aucs"].push_back(std::isnan(a) ? json() : json(a));
      m["mean"] = stats.mean;
      m["std"] = stats.stddev;
      m["failures"] = stats.failures;
      c["methods"][name] = m;
    }
    if (cell.has_test) {
      c["t_stat"] = cell.t_stat;
      c["p_value"] = cell.p_value;
    }
    c["warnings"] = cell.warnings;
    j["cells"].push_back(c);
  }
  return j.dump(2);
}

}  // namespace ggbm
