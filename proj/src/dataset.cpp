#include "ggbm/dataset.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "ggbm/csv.hpp"

namespace ggbm {

PathDataset PathDataset::from_matrix(MatD values, MaskMat missing, VecD weights,
                                     std::vector<std::int8_t> labels, ColumnLayout layout) {
  PathDataset ds;
  if (missing.rows() != values.rows() || missing.cols() != values.cols())
    throw ValidationError("dataset: value/missing shape mismatch");
  if (weights.size() != values.rows() || static_cast<Eigen::Index>(labels.size()) != values.rows())
    throw ValidationError("dataset: weight/label length mismatch");
  if (layout.width() != values.cols())
    throw ValidationError("dataset: column count does not match layout width");
  for (Eigen::Index i = 0; i < weights.size(); ++i)
    if (!(weights(i) > 0)) throw ValidationError("dataset: case weights must be positive");
  ds.values = std::move(values);
  ds.missing = std::move(missing);
  ds.weights = std::move(weights);
  ds.labels = std::move(labels);
  ds.layout = std::move(layout);
  ds.heads.resize(ds.labels.size());
  for (std::size_t i = 0; i < ds.heads.size(); ++i) ds.heads[i] = static_cast<NodeId>(i);
  return ds;
}

PathDataset build_dataset(const HinGraph& g, std::span<const NodeId> heads, int radius,
                          const MetapathSchema& schema, const PathLimits& limits, int workers) {
  for (NodeId h : heads) {
    if (h < 0 || h >= g.num_nodes())
      throw ValidationError("dataset: unknown head node " + std::to_string(h));
    if (!g.has_label(h))
      throw ValidationError("dataset: unlabeled head node '" + g.external_id(h) + "'");
  }

  struct HeadRows {
    std::vector<WeightedPath> paths;
  };
  std::vector<HeadRows> per_head(heads.size());
  std::exception_ptr failure;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto worker_fn = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      std::size_t i = next.fetch_add(1);
      if (i >= heads.size()) break;
      try {
        EgoNet ego = egonet(g, heads[i], radius);
        per_head[i].paths = enumerate_weighted_paths(ego, schema, limits);
      } catch (...) {
        failed.store(true);
        failure = std::current_exception();
        break;
      }
    }
  };

  int n_workers = std::max(1, workers);
  if (n_workers == 1 || heads.size() <= 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker_fn);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ColumnLayout layout = ColumnLayout::build(g.schema(), radius);
  std::size_t total_rows = 0;
  for (const auto& hr : per_head) total_rows += hr.paths.size();

  PathDataset ds;
  ds.layout = layout;
  ds.values.resize(total_rows, layout.width());
  ds.missing.resize(total_rows, layout.width());
  ds.weights.resize(total_rows);
  ds.labels.reserve(total_rows);
  ds.heads.reserve(total_rows);
  ds.paths.reserve(total_rows);

  Eigen::Index r = 0;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    double weight_sum = 0;
    for (auto& wp : per_head[i].paths) {
      FeatureRow row = featurize_path(g, wp.path, layout);
      ds.values.row(r) = row.values.transpose();
      ds.missing.row(r) = row.missing.transpose();
      ds.weights(r) = wp.weight;
      ds.labels.push_back(static_cast<std::int8_t>(*g.label(heads[i])));
      ds.heads.push_back(heads[i]);
      weight_sum += wp.weight;
      ds.paths.push_back(std::move(wp.path));
      ++r;
    }
    if (std::abs(weight_sum - 1.0) > 1e-9)
      throw ValidationError("dataset: path weights of head '" + g.external_id(heads[i]) +
                            "' sum to " + format_double(weight_sum) + " instead of 1");
  }
  return ds;
}

void dataset_to_csv(const PathDataset& ds, const HinGraph& g, const std::string& path) {
  CsvWriter out(path);
  std::vector<std::string> header;
  for (const auto& c : ds.layout.columns()) header.push_back(c.name);
  header.push_back("__head");
  header.push_back("__weight");
  header.push_back("__label");
  out.row(header);
  for (int r = 0; r < ds.rows(); ++r) {
    std::vector<std::string> row;
    row.reserve(ds.cols() + 3);
    for (int c = 0; c < ds.cols(); ++c)
      row.push_back(ds.is_missing(r, c) ? "" : format_double(ds.values(r, c)));
    row.push_back(g.external_id(ds.heads[r]));
    row.push_back(format_double(ds.weights(r)));
    row.push_back(std::to_string(static_cast<int>(ds.labels[r])));
    out.row(row);
  }
}

void paths_to_csv(const PathDataset& ds, const HinGraph& g, const std::string& path) {
  CsvWriter out(path);
  out.row({"head_id", "path_nodes", "path_edges", "weight"});
  for (int r = 0; r < ds.rows(); ++r) {
    const SimplePath& p = ds.paths.at(r);
    std::string nodes, edges;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      if (i) nodes += '|';
      nodes += g.external_id(p.nodes[i]);
    }
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
      if (i) edges += '|';
      edges += std::to_string(p.edges[i]);
    }
    out.row({g.external_id(p.head), nodes, edges, format_double(ds.weights(r))});
  }
}

}  // namespace ggbm
