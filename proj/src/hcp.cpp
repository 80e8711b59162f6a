#include "ggbm/hcp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

#include "ggbm/csv.hpp"

namespace ggbm {

using nlohmann::json;

namespace {

// Two-digit fixed-point parse keeps currency amounts exact at ingestion.
double parse_amount(const std::string& field, const std::string& where) {
  std::string text = field;
  auto dot = text.find('.');
  std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  if (frac.size() > 2) throw ValidationError(where + ": amount '" + field + "' has more than 2 decimals");
  while (frac.size() < 2) frac.push_back('0');
  bool negative = false;
  if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) {
    negative = whole[0] == '-';
    whole.erase(0, 1);
  }
  if (whole.empty()) whole = "0";
  for (char c : whole + frac)
    if (c < '0' || c > '9') throw ValidationError(where + ": cannot parse amount '" + field + "'");
  long long cents = std::stoll(whole) * 100 + std::stoll(frac);
  return (negative ? -1.0 : 1.0) * static_cast<double>(cents) / 100.0;
}

}  // namespace

std::vector<ClaimRecord> load_claims_csv(const std::string& path,
                                         const std::string& amount_column) {
  CsvTable table = read_csv(path);
  const int id_col = table.column("claim_id");
  const int prov_col = table.column("provider_id");
  const int bene_col = table.column("beneficiary_id");
  const int amount_col = table.column(amount_column);
  if (id_col < 0 || prov_col < 0 || bene_col < 0)
    throw ValidationError("claims: " + path +
                          ": header must contain claim_id,provider_id,beneficiary_id");
  if (amount_col < 0)
    throw ValidationError("claims: " + path + ": missing amount column '" + amount_column + "'");

  std::vector<ClaimRecord> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = path + ":" + std::to_string(table.line_numbers[r]);
    ClaimRecord claim;
    claim.claim_id = row[id_col];
    claim.provider_id = row[prov_col];
    claim.beneficiary_id = row[bene_col];
    if (claim.provider_id.empty() || claim.beneficiary_id.empty())
      throw ValidationError(where + ": provider and beneficiary ids must be non-empty");
    claim.amount = parse_amount(row[amount_col], where);
    if (claim.amount < 0) throw ValidationError(where + ": amount must be non-negative");
    out.push_back(std::move(claim));
  }
  return out;
}

std::map<std::string, ProviderFeatures> build_provider_features(
    std::span<const ClaimRecord> claims) {
  struct Acc {
    double sum = 0.0;
    double sum_sq = 0.0;
    int count = 0;
    std::set<std::string> beneficiaries;
  };
  std::map<std::string, Acc> acc;
  for (const auto& c : claims) {
    Acc& a = acc[c.provider_id];
    a.sum += c.amount;
    a.sum_sq += c.amount * c.amount;
    a.count += 1;
    a.beneficiaries.insert(c.beneficiary_id);
  }
  std::map<std::string, ProviderFeatures> out;
  for (const auto& [provider, a] : acc) {
    ProviderFeatures f;
    f.claim_count = static_cast<double>(a.count);
    f.mean_amount = a.sum / a.count;
    const double variance = std::max(0.0, a.sum_sq / a.count - f.mean_amount * f.mean_amount);
    f.std_amount = a.count > 1 ? std::sqrt(variance) : 0.0;
    f.beneficiary_count = static_cast<double>(a.beneficiaries.size());
    out[provider] = f;
  }
  return out;
}

BeneficiaryTable load_beneficiaries_csv(const std::string& path) {
  CsvTable table = read_csv(path);
  if (table.header.empty() || table.header[0] != "beneficiary_id")
    throw ValidationError("beneficiaries: " + path + ": header must start with beneficiary_id");
  BeneficiaryTable out;
  for (std::size_t i = 1; i < table.header.size(); ++i)
    out.features.push_back({table.header[i], false});
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = path + ":" + std::to_string(table.line_numbers[r]);
    std::vector<std::optional<double>> feats;
    for (std::size_t i = 1; i < row.size(); ++i)
      feats.push_back(parse_optional_double(row[i], where));
    out.rows[row[0]] = std::move(feats);
  }
  return out;
}

std::map<std::string, int> load_provider_labels_csv(const std::string& path) {
  CsvTable table = read_csv(path);
  const int id_col = table.column("provider_id");
  const int label_col = table.column("label");
  if (id_col < 0 || label_col < 0)
    throw ValidationError("labels: " + path + ": header must contain provider_id,label");
  std::map<std::string, int> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string where = path + ":" + std::to_string(table.line_numbers[r]);
    if (table.rows[r][label_col].empty()) continue;
    double l = parse_double(table.rows[r][label_col], where);
    if (l != 0.0 && l != 1.0) throw ValidationError(where + ": label must be 0 or 1");
    out[table.rows[r][id_col]] = static_cast<int>(l);
  }
  return out;
}

HinGraph build_bipartite_graph(std::span<const ClaimRecord> claims,
                               const BeneficiaryTable& beneficiaries,
                               const std::map<std::string, int>& provider_labels) {
  auto provider_features = build_provider_features(claims);

  NodeTypeDef provider_type;
  provider_type.name = "provider";
  provider_type.features = {{"claim_count", false},
                            {"mean_amount", false},
                            {"std_amount", false},
                            {"beneficiary_count", false}};
  NodeTypeDef beneficiary_type;
  beneficiary_type.name = "beneficiary";
  beneficiary_type.features = beneficiaries.features;
  EdgeTypeDef edge_type;
  edge_type.name = "claims";
  edge_type.source_type = "provider";
  edge_type.target_type = "beneficiary";
  GraphSchema schema({provider_type, beneficiary_type}, {edge_type});

  std::set<std::string> beneficiary_ids;
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& c : claims) {
    if (!beneficiaries.rows.count(c.beneficiary_id))
      throw ValidationError("hcp: beneficiary '" + c.beneficiary_id + "' has no feature row");
    beneficiary_ids.insert(c.beneficiary_id);
    pairs.insert({c.provider_id, c.beneficiary_id});
  }

  std::vector<NodeInput> nodes;
  for (const auto& [provider, f] : provider_features) {
    NodeInput n;
    n.id = provider;
    n.type = "provider";
    n.features = {f.claim_count, f.mean_amount, f.std_amount, f.beneficiary_count};
    auto it = provider_labels.find(provider);
    if (it != provider_labels.end()) n.label = it->second;
    nodes.push_back(std::move(n));
  }
  for (const auto& b : beneficiary_ids) {
    NodeInput n;
    n.id = b;
    n.type = "beneficiary";
    n.features = beneficiaries.rows.at(b);
    nodes.push_back(std::move(n));
  }

  std::vector<EdgeInput> edges;
  for (const auto& [provider, beneficiary] : pairs)
    edges.push_back({provider, beneficiary, "claims", {}});

  return build_graph(schema, nodes, edges);
}

namespace {

// Synchronous label propagation; node-id ordering breaks frequency ties, so
// the outcome is deterministic.
std::vector<int> propagate_communities(const HinGraph& g, int max_iters = 100) {
  std::vector<int> label(g.num_nodes());
  std::iota(label.begin(), label.end(), 0);
  std::vector<int> next(g.num_nodes());
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      auto nbrs = g.neighbors(v);
      if (nbrs.empty()) {
        next[v] = label[v];
        continue;
      }
      std::map<int, int> freq;
      freq[label[v]]++;  // self vote damps two-coloring oscillation on bipartite parts
      for (const auto& [nb, eid] : nbrs) freq[label[nb]]++;
      int best_label = label[v];
      int best_count = 0;
      for (const auto& [l, count] : freq) {
        if (count > best_count || (count == best_count && l < best_label)) {
          best_label = l;
          best_count = count;
        }
      }
      next[v] = best_label;
      changed = changed || next[v] != label[v];
    }
    label.swap(next);
    if (!changed) break;
  }
  return label;
}

}  // namespace

CommunitySplit community_split(const HinGraph& g, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ValidationError("split: test fraction must be in (0,1)");

  std::vector<int> community = propagate_communities(g);

  std::map<int, std::vector<NodeId>> groups;
  for (NodeId v = 0; v < g.num_nodes(); ++v) groups[community[v]].push_back(v);

  const auto labeled = g.labeled_nodes();
  const int labeled_total = static_cast<int>(labeled.size());
  if (labeled_total == 0) throw ValidationError("split: graph has no labeled nodes");

  std::vector<std::pair<int, std::vector<NodeId>>> communities(groups.begin(), groups.end());
  CommunitySplit split;
  for (const auto& [id, members] : communities)
    split.community_sizes.push_back(static_cast<int>(members.size()));
  std::sort(split.community_sizes.rbegin(), split.community_sizes.rend());

  auto labeled_in = [&g](const std::vector<NodeId>& members) {
    int count = 0;
    for (NodeId v : members) count += g.has_label(v) ? 1 : 0;
    return count;
  };

  const double max_side = std::max(test_fraction, 1.0 - test_fraction);
  for (const auto& [id, members] : communities) {
    if (labeled_in(members) > max_side * labeled_total)
      throw ValidationError("split: a single community holds more labeled nodes than either side's target");
  }

  // Deterministic shuffle, then greedy packing until the labeled target.
  std::mt19937_64 rng(seed);
  std::shuffle(communities.begin(), communities.end(), rng);

  std::vector<std::uint8_t> in_test(g.num_nodes(), 0);
  int labeled_in_test = 0;
  for (const auto& [id, members] : communities) {
    if (labeled_in_test >= test_fraction * labeled_total) break;
    for (NodeId v : members) in_test[v] = 1;
    labeled_in_test += labeled_in(members);
    ++split.communities_in_test;
  }
  split.test_labeled_fraction = static_cast<double>(labeled_in_test) / labeled_total;

  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto& edge = g.edge(e);
    if (in_test[edge.u] != in_test[edge.v]) ++split.dropped_edges;
  }

  auto subgraph = [&](bool take_test) {
    std::vector<NodeInput> nodes;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      if ((in_test[v] != 0) != take_test) continue;
      NodeInput n;
      n.id = g.external_id(v);
      n.type = g.schema().node_type(g.node_type(v)).name;
      const VecD& feat = g.node_features(v);
      const MaskVec& miss = g.node_missing(v);
      for (Eigen::Index i = 0; i < feat.size(); ++i)
        n.features.push_back(miss(i) ? std::optional<double>() : std::optional<double>(feat(i)));
      if (g.has_label(v)) n.label = *g.label(v);
      nodes.push_back(std::move(n));
    }
    std::vector<EdgeInput> edges;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const auto& edge = g.edge(e);
      if ((in_test[edge.u] != 0) != take_test || (in_test[edge.v] != 0) != take_test) continue;
      EdgeInput in;
      in.u = g.external_id(edge.u);
      in.v = g.external_id(edge.v);
      in.type = g.schema().edge_type(edge.type).name;
      for (Eigen::Index i = 0; i < edge.features.size(); ++i)
        in.features.push_back(edge.missing(i) ? std::optional<double>()
                                              : std::optional<double>(edge.features(i)));
      edges.push_back(std::move(in));
    }
    return build_graph(g.schema(), nodes, edges);
  };

  split.train = subgraph(false);
  split.test = subgraph(true);
  return split;
}

std::string CommunitySplit::report_json() const {
  json j;
  j["dropped_edges"] = dropped_edges;
  j["community_sizes"] = community_sizes;
  j["communities_in_test"] = communities_in_test;
  j["test_labeled_fraction"] = test_labeled_fraction;
  j["train_nodes"] = train.num_nodes();
  j["train_edges"] = train.num_edges();
  j["test_nodes"] = test.num_nodes();
  j["test_edges"] = test.num_edges();
  return j.dump(2);
}

}  // namespace ggbm
