#pragma once

#include <span>
#include <string>
#include <vector>

#include "ggbm/path_engine.hpp"

namespace ggbm {

// Training table for the tree engine: one row per (head, maximal path), case
// weight = walk probability, label copied from the head node.
struct PathDataset {
  MatD values;
  MaskMat missing;
  VecD weights;
  std::vector<std::int8_t> labels;
  std::vector<NodeId> heads;
  ColumnLayout layout;
  std::vector<SimplePath> paths;  // row provenance; empty for plain tabular data

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }

  bool is_missing(int row, int col) const { return missing(row, col) != 0; }

  static PathDataset from_matrix(MatD values, MaskMat missing, VecD weights,
                                 std::vector<std::int8_t> labels, ColumnLayout layout);
};

// One row per maximal path of each head, heads in input order, paths in
// depth-first order. Parallelizable per head; output is worker-independent.
PathDataset build_dataset(const HinGraph& g, std::span<const NodeId> heads, int radius,
                          const MetapathSchema& schema, const PathLimits& limits = {},
                          int workers = 1);

void dataset_to_csv(const PathDataset& ds, const HinGraph& g, const std::string& path);
void paths_to_csv(const PathDataset& ds, const HinGraph& g, const std::string& path);

}  // namespace ggbm
