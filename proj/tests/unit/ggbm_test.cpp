#include <doctest.h>

#include <filesystem>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "ggbm/ggbm.hpp"
#include "ggbm/randgraph.hpp"

using namespace ggbm;
using ggbm::testing::make_homogeneous;
using ggbm::testing::make_hub_graph;

namespace {

HinGraph random_labeled_graph(std::uint64_t seed, int nodes = 40, double p = 0.08) {
  GraphModelParams params;
  params.model = GraphModel::ErdosRenyi;
  params.nodes = nodes;
  params.er_p = p;
  params.seed = seed;
  HinGraph g = assign_features(generate(params), seed + 1);
  ScenarioConfig cfg;
  cfg.scenario = 1;
  cfg.radius = 1;
  return g.relabeled(scenario1_labels(g, cfg));
}

std::vector<NodeId> all_nodes(const HinGraph& g) {
  std::vector<NodeId> out(g.num_nodes());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

TrainConfig small_boosted(std::uint64_t seed = 0) {
  TrainConfig cfg;
  cfg.num_trees = 30;
  cfg.max_depth = 3;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("radius-zero fit equals the plain boosted model on head features") {
  HinGraph g = random_labeled_graph(101);
  auto heads = all_nodes(g);
  TrainConfig cfg = small_boosted(7);

  GgbmModel via_graph = fit_ggbm(g, heads, MetapathSchema::wildcard(0), 0, cfg);
  PathDataset tabular = build_dataset(g, heads, 0, MetapathSchema::wildcard(0));
  BoostedEnsemble direct = fit_boosted(tabular, cfg);

  REQUIRE(via_graph.ensemble.trees.size() == direct.trees.size());
  for (std::size_t t = 0; t < direct.trees.size(); ++t) {
    const auto& a = via_graph.ensemble.trees[t].nodes();
    const auto& b = direct.trees[t].nodes();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].leaf == b[i].leaf);
      if (a[i].leaf)
        CHECK(a[i].value == b[i].value);
      else
        CHECK(a[i].split.column == b[i].split.column);
    }
  }
  for (NodeId v : heads) {
    FeatureRow row = featurize_path(
        g, SimplePath{v, {v}, {}, true}, via_graph.layout);
    const double from_graph = predict_node(via_graph, g, v);
    const double from_rows = direct.predict_row(
        std::span<const double>(row.values.data(), static_cast<std::size_t>(row.values.size())),
        std::span<const std::uint8_t>(row.missing.data(),
                                      static_cast<std::size_t>(row.missing.size())));
    CHECK(std::abs(from_graph - from_rows) <= 1e-12);
  }
}

TEST_CASE("layout width for a two-type graph follows the block formula") {
  HinGraph g = make_hub_graph();
  std::vector<std::int8_t> labels(10, 0);
  labels[0] = 1;
  labels[3] = 1;
  HinGraph lg = g.relabeled(labels);
  auto heads = all_nodes(lg);
  GgbmModel model = fit_ggbm(lg, heads, MetapathSchema::wildcard(2), 2, small_boosted());
  // d_company + d_admin + 2 * (f_rel + d_company + d_admin)
  CHECK(model.layout.width() == (2 + 1) + 2 * (1 + 2 + 1));
}

TEST_CASE("single-class heads are rejected") {
  HinGraph g = make_hub_graph();  // only node 0 carries a label (class 1)
  std::vector<NodeId> heads{0};
  CHECK_THROWS_WITH_AS(fit_ggbm(g, heads, MetapathSchema::wildcard(1), 1, small_boosted()),
                       doctest::Contains("single-class"), ValidationError);
}

TEST_CASE("prediction on an isolated node equals the head-only row prediction") {
  HinGraph base = make_homogeneous(3, {}, {0.7, -0.2, 1.4});
  HinGraph g = base.relabeled(std::vector<std::int8_t>{1, 0, 1});
  auto heads = all_nodes(g);
  GgbmModel model = fit_ggbm(g, heads, MetapathSchema::wildcard(2), 2, small_boosted());
  for (NodeId v : heads) {
    FeatureRow row = featurize_path(g, SimplePath{v, {v}, {}, true}, model.layout);
    const double direct = model.ensemble.predict_row(
        std::span<const double>(row.values.data(), static_cast<std::size_t>(row.values.size())),
        std::span<const std::uint8_t>(row.missing.data(),
                                      static_cast<std::size_t>(row.missing.size())));
    CHECK(predict_node(model, g, v) == direct);
  }
}

TEST_CASE("constant path scores aggregate to the same constant") {
  HinGraph g = make_hub_graph();
  ColumnLayout layout = ColumnLayout::build(g.schema(), 2);
  const double out = predict_node_with(g, 0, MetapathSchema::wildcard(2), 2, layout,
                                       [](std::size_t, const FeatureRow&) { return 0.42; });
  CHECK(out == doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("hub head aggregates stubbed per-path scores by walk weight") {
  HinGraph g = make_hub_graph();
  ColumnLayout layout = ColumnLayout::build(g.schema(), 2);
  const std::vector<double> stub{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const double out =
      predict_node_with(g, 0, MetapathSchema::wildcard(2), 2, layout,
                        [&stub](std::size_t i, const FeatureRow&) { return stub[i]; });
  CHECK(out == doctest::Approx(0.33).epsilon(1e-12));
}

TEST_CASE("node prediction stays inside the per-path prediction range") {
  HinGraph g = random_labeled_graph(303, 30, 0.12);
  auto heads = all_nodes(g);
  GgbmModel model = fit_ggbm(g, heads, MetapathSchema::wildcard(2), 2, small_boosted(5));
  for (NodeId v : heads) {
    EgoNet ego = egonet(g, v, 2);
    auto weighted = enumerate_weighted_paths(ego, model.metapaths);
    double lo = 1.0, hi = 0.0;
    for (const auto& wp : weighted) {
      FeatureRow row = featurize_path(g, wp.path, model.layout);
      const double p = model.ensemble.predict_row(
          std::span<const double>(row.values.data(), static_cast<std::size_t>(row.values.size())),
          std::span<const std::uint8_t>(row.missing.data(),
                                        static_cast<std::size_t>(row.missing.size())));
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    const double agg = predict_node(model, g, v);
    CHECK(agg >= lo - 1e-12);
    CHECK(agg <= hi + 1e-12);
  }
}

TEST_CASE("classification threshold is inclusive") {
  CHECK(classify(0.5, 0.5) == 1);
  CHECK(classify(0.49, 0.5) == 0);
  CHECK(classify(1.0, 0.999) == 1);
  CHECK(classify(1.0, 1.0) == 1);
  CHECK_THROWS_AS(classify(1.2, 0.5), ValidationError);
}

TEST_CASE("scoring an updated graph re-derives paths without refitting") {
  // disjoint chains a-b-c where only the two-hop feature x_c carries signal
  const int chains = 20;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> feats(3 * chains);
  std::vector<std::int8_t> labels(3 * chains, -1);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<NodeId> heads;
  for (int k = 0; k < chains; ++k) {
    const int a = 3 * k, b = 3 * k + 1, c = 3 * k + 2;
    edges.push_back({a, b});
    edges.push_back({b, c});
    feats[a] = unif(rng);
    feats[b] = unif(rng);
    feats[c] = (k % 2 == 0) ? 2.0 + unif(rng) : -2.0 + unif(rng);
    labels[a] = k % 2 == 0 ? 1 : 0;
    heads.push_back(a);
  }
  HinGraph base = make_homogeneous(3 * chains, edges, feats);
  HinGraph g = base.relabeled(labels);
  GgbmModel model = fit_ggbm(g, heads, MetapathSchema::wildcard(2), 2, small_boosted(3));

  const double before = predict_node(model, g, 0);
  CHECK(before > 0.5);  // chain 0 is a positive chain

  // same topology, the two-hop feature of chain 0 flipped to the negative band
  auto flipped = feats;
  flipped[2] = -2.5;
  VecD flipped_vec(3 * chains);
  for (int i = 0; i < 3 * chains; ++i) flipped_vec(i) = flipped[i];
  HinGraph changed = base.with_node_feature(0, flipped_vec).relabeled(labels);
  const double after = predict_node(model, changed, 0);
  CHECK(after < before);

  // adding an edge changes the path set, again with no refit
  auto more_edges = edges;
  more_edges.push_back({0, 2});
  HinGraph extended = make_homogeneous(3 * chains, more_edges, feats).relabeled(labels);
  CHECK_NOTHROW(predict_node(model, extended, 0));
  auto paths = enumerate_paths(egonet(extended, 0, 2), model.metapaths);
  CHECK(paths.size() == 2);
}

TEST_CASE("prediction rejects unknown nodes and unseen node types") {
  HinGraph g = random_labeled_graph(505, 20, 0.1);
  GgbmModel model = fit_ggbm(g, all_nodes(g), MetapathSchema::wildcard(1), 1, small_boosted());
  CHECK_THROWS_WITH_AS(predict_node(model, g, 99), doctest::Contains("unknown node"),
                       ValidationError);
  HinGraph other = make_hub_graph();
  CHECK_THROWS_WITH_AS(predict_node(model, other, 0), doctest::Contains("not present"),
                       ValidationError);
}

TEST_CASE("grouped importance puts all radius-zero mass on the head slot") {
  HinGraph g = random_labeled_graph(707);
  GgbmModel model = fit_ggbm(g, all_nodes(g), MetapathSchema::wildcard(0), 0, small_boosted());
  GroupedImportance imp = importance_grouped(model);
  double total = 0.0;
  for (const auto& [slot, v] : imp.by_slot) {
    if (slot != "H") CHECK(v == 0.0);
    total += v;
  }
  CHECK(imp.by_slot.at("H") == doctest::Approx(total));
}

TEST_CASE("grouped importance aggregates match the per-column totals") {
  HinGraph g = random_labeled_graph(809);
  GgbmModel model = fit_ggbm(g, all_nodes(g), MetapathSchema::wildcard(2), 2, small_boosted(2));
  PathDataset ds = build_dataset(g, all_nodes(g), 2, model.metapaths);
  GroupedImportance imp = importance_grouped(model, &ds, 11, 2);

  double column_total = 0.0, slot_total = 0.0, level_total = 0.0;
  for (const auto& e : imp.columns) {
    column_total += e.gain;
    CHECK(e.has_permutation);
  }
  for (const auto& [slot, v] : imp.by_slot) slot_total += v;
  for (const auto& [level, v] : imp.by_level) level_total += v;
  CHECK(slot_total == doctest::Approx(column_total).epsilon(1e-12));
  CHECK(level_total == doctest::Approx(column_total).epsilon(1e-12));
}

TEST_CASE("grouped importance rejects a layout digest mismatch") {
  HinGraph g = random_labeled_graph(911);
  GgbmModel model = fit_ggbm(g, all_nodes(g), MetapathSchema::wildcard(2), 2, small_boosted());
  PathDataset wrong = build_dataset(g, all_nodes(g), 1, MetapathSchema::wildcard(1));
  CHECK_THROWS_WITH_AS(importance_grouped(model, &wrong), doctest::Contains("digest"),
                       ValidationError);
}

TEST_CASE("ggbm model file round-trips and predicts identically") {
  namespace fs = std::filesystem;
  HinGraph g = random_labeled_graph(1013, 30, 0.1);
  GgbmModel model = fit_ggbm(g, all_nodes(g), MetapathSchema::wildcard(2), 2, small_boosted(9));
  const std::string path = (fs::temp_directory_path() / "ggbm_model_test.json").string();
  model.save(path);
  GgbmModel loaded = GgbmModel::load(path);
  CHECK(loaded.radius == model.radius);
  CHECK(loaded.layout.digest() == model.layout.digest());
  CHECK(loaded.metapaths == model.metapaths);
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    CHECK(predict_node(loaded, g, v) == predict_node(model, g, v));
  fs::remove(path);
}
