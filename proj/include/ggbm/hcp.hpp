#pragma once

#include <map>
#include <string>
#include <vector>

#include "ggbm/hin_graph.hpp"

namespace ggbm {

struct ClaimRecord {
  std::string claim_id;
  std::string provider_id;
  std::string beneficiary_id;
  double amount = 0.0;
};

// claims.csv: claim_id,provider_id,beneficiary_id,<amount column>,...
// Amounts are parsed as two-digit fixed-point decimals.
std::vector<ClaimRecord> load_claims_csv(const std::string& path,
                                         const std::string& amount_column = "amount_paid");

struct ProviderFeatures {
  double claim_count = 0.0;
  double mean_amount = 0.0;
  double std_amount = 0.0;  // population standard deviation; 0 for one claim
  double beneficiary_count = 0.0;
};

std::map<std::string, ProviderFeatures> build_provider_features(
    std::span<const ClaimRecord> claims);

struct BeneficiaryTable {
  std::vector<FeatureDef> features;
  std::map<std::string, std::vector<std::optional<double>>> rows;
};

BeneficiaryTable load_beneficiaries_csv(const std::string& path);
std::map<std::string, int> load_provider_labels_csv(const std::string& path);

// Two node types (provider with the four constructed features, beneficiary
// with the supplied ones) joined by one deduplicated edge per distinct
// (provider, beneficiary) pair.
HinGraph build_bipartite_graph(std::span<const ClaimRecord> claims,
                               const BeneficiaryTable& beneficiaries,
                               const std::map<std::string, int>& provider_labels);

struct CommunitySplit {
  HinGraph train;
  HinGraph test;
  int dropped_edges = 0;
  std::vector<int> community_sizes;        // descending
  int communities_in_test = 0;
  double test_labeled_fraction = 0.0;

  std::string report_json() const;
};

// Label-propagation communities packed greedily into the test side until its
// share of labeled nodes reaches the target; the split is node-disjoint and
// cross-community edges are dropped (and counted), never kept.
CommunitySplit community_split(const HinGraph& g, double test_fraction, std::uint64_t seed);

}  // namespace ggbm
