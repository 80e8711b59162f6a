#pragma once

#include <string>
#include <vector>

#include "ggbm/schema.hpp"

namespace ggbm {

// Constrains path enumeration to admissible alternating type sequences
// (node type, edge type, node type, ...), or allows everything up to a
// maximum length. The zero-length path is always admissible so every head
// yields at least one path.
class MetapathSchema {
 public:
  static MetapathSchema wildcard(int max_length);
  // Each sequence is node type, edge type, node type, ... starting and ending
  // with a node type. Sequences longer than max_length are usable up to the cap.
  static MetapathSchema with_sequences(std::vector<std::vector<std::string>> sequences,
                                       int max_length);

  int max_length() const { return max_length_; }
  bool is_wildcard() const { return wildcard_; }
  const std::vector<std::vector<std::string>>& sequences() const { return sequences_; }

  std::string to_json_string() const;
  static MetapathSchema from_json_string(const std::string& text);

  bool operator==(const MetapathSchema& other) const;

 private:
  MetapathSchema() = default;
  int max_length_ = 0;
  bool wildcard_ = true;
  std::vector<std::vector<std::string>> sequences_;
};

// Sequences resolved against a concrete graph schema for fast prefix checks
// during enumeration.
class ResolvedMetapaths {
 public:
  ResolvedMetapaths(const MetapathSchema& schema, const GraphSchema& graph_schema);

  int max_length() const { return max_length_; }
  bool wildcard() const { return wildcard_; }

  // Sequence indices whose head type matches; the DFS narrows this set.
  std::vector<int> start(int head_node_type) const;
  bool can_extend(const std::vector<int>& active, int steps_taken, int edge_type,
                  int node_type) const;
  std::vector<int> extended(const std::vector<int>& active, int steps_taken, int edge_type,
                            int node_type) const;

 private:
  int max_length_ = 0;
  bool wildcard_ = true;
  std::vector<std::vector<int>> node_seq_;
  std::vector<std::vector<int>> edge_seq_;
};

}  // namespace ggbm
