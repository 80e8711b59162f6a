#include "ggbm/metapath.hpp"

#include <json.hpp>

namespace ggbm {

using nlohmann::json;

MetapathSchema MetapathSchema::wildcard(int max_length) {
  if (max_length < 0) throw ValidationError("metapath: max length must be >= 0");
  MetapathSchema s;
  s.max_length_ = max_length;
  s.wildcard_ = true;
  return s;
}

MetapathSchema MetapathSchema::with_sequences(std::vector<std::vector<std::string>> sequences,
                                              int max_length) {
  if (max_length < 0) throw ValidationError("metapath: max length must be >= 0");
  for (const auto& seq : sequences) {
    if (seq.empty() || seq.size() % 2 == 0)
      throw ValidationError(
          "metapath: sequence must alternate node and edge types and start/end with a node type");
  }
  MetapathSchema s;
  s.max_length_ = max_length;
  s.wildcard_ = false;
  s.sequences_ = std::move(sequences);
  return s;
}

std::string MetapathSchema::to_json_string() const {
  json j;
  j["max_length"] = max_length_;
  if (wildcard_) {
    j["wildcard"] = true;
  } else {
    j["wildcard"] = false;
    j["sequences"] = sequences_;
  }
  return j.dump();
}

MetapathSchema MetapathSchema::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("metapath: invalid JSON: ") + e.what());
  }
  int max_length = j.at("max_length").get<int>();
  if (j.value("wildcard", true)) return wildcard(max_length);
  return with_sequences(j.at("sequences").get<std::vector<std::vector<std::string>>>(), max_length);
}

bool MetapathSchema::operator==(const MetapathSchema& other) const {
  return max_length_ == other.max_length_ && wildcard_ == other.wildcard_ &&
         sequences_ == other.sequences_;
}

ResolvedMetapaths::ResolvedMetapaths(const MetapathSchema& schema, const GraphSchema& graph_schema)
    : max_length_(schema.max_length()), wildcard_(schema.is_wildcard()) {
  if (wildcard_) return;
  for (const auto& seq : schema.sequences()) {
    std::vector<int> nodes, edges;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i % 2 == 0)
        nodes.push_back(graph_schema.node_type_index(seq[i]));
      else
        edges.push_back(graph_schema.edge_type_index(seq[i]));
    }
    node_seq_.push_back(std::move(nodes));
    edge_seq_.push_back(std::move(edges));
  }
}

std::vector<int> ResolvedMetapaths::start(int head_node_type) const {
  std::vector<int> active;
  if (wildcard_) return active;
  for (std::size_t i = 0; i < node_seq_.size(); ++i)
    if (node_seq_[i][0] == head_node_type) active.push_back(static_cast<int>(i));
  return active;
}

bool ResolvedMetapaths::can_extend(const std::vector<int>& active, int steps_taken, int edge_type,
                                   int node_type) const {
  if (steps_taken >= max_length_) return false;
  if (wildcard_) return true;
  for (int i : active) {
    if (static_cast<int>(edge_seq_[i].size()) <= steps_taken) continue;
    if (edge_seq_[i][steps_taken] == edge_type && node_seq_[i][steps_taken + 1] == node_type)
      return true;
  }
  return false;
}

std::vector<int> ResolvedMetapaths::extended(const std::vector<int>& active, int steps_taken,
                                             int edge_type, int node_type) const {
  std::vector<int> out;
  if (wildcard_) return out;
  for (int i : active) {
    if (static_cast<int>(edge_seq_[i].size()) <= steps_taken) continue;
    if (edge_seq_[i][steps_taken] == edge_type && node_seq_[i][steps_taken + 1] == node_type)
      out.push_back(i);
  }
  return out;
}

}  // namespace ggbm
