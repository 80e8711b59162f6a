#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "ggbm/dataset.hpp"
#include "ggbm/randgraph.hpp"

using namespace ggbm;
using ggbm::testing::brute_force_max_paths;
using ggbm::testing::make_homogeneous;
using ggbm::testing::make_hub_graph;

namespace {

std::vector<std::vector<NodeId>> node_sequences(const std::vector<SimplePath>& paths) {
  std::vector<std::vector<NodeId>> out;
  for (const auto& p : paths) out.push_back(p.nodes);
  return out;
}

}  // namespace

TEST_CASE("isolated node yields exactly the dead-end singleton path") {
  HinGraph g = make_homogeneous(1, {});
  EgoNet ego = egonet(g, 0, 3);
  auto paths = enumerate_paths(ego, MetapathSchema::wildcard(3));
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].nodes == std::vector<NodeId>{0});
  CHECK(paths[0].dead_end);
  CHECK(path_weight(ego, paths[0], MetapathSchema::wildcard(3)) == 1.0);
}

TEST_CASE("hub fixture enumerates its six maximal paths in depth-first order") {
  HinGraph g = make_hub_graph();
  EgoNet ego = egonet(g, 0, 2);
  auto paths = enumerate_paths(ego, MetapathSchema::wildcard(2));
  std::vector<std::vector<NodeId>> expected{{0, 1, 6}, {0, 2, 7}, {0, 3},
                                            {0, 4, 8}, {0, 4, 9}, {0, 5, 9}};
  CHECK(node_sequences(paths) == expected);
  CHECK(paths[2].dead_end);        // (0,3) stops early
  CHECK_FALSE(paths[0].dead_end);  // (0,1,6) is length-capped
}

TEST_CASE("hub fixture walk weights are the frozen values and sum to one") {
  HinGraph g = make_hub_graph();
  EgoNet ego = egonet(g, 0, 2);
  MetapathSchema schema = MetapathSchema::wildcard(2);
  auto weighted = enumerate_weighted_paths(ego, schema);
  REQUIRE(weighted.size() == 6);
  const std::vector<double> expected{0.2, 0.2, 0.2, 0.1, 0.1, 0.2};
  double sum = 0.0;
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    CHECK(weighted[i].weight == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(path_weight(ego, weighted[i].path, schema) ==
          doctest::Approx(expected[i]).epsilon(1e-12));
    sum += weighted[i].weight;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("triangle paths visit both directions and never revisit the head") {
  HinGraph g = make_homogeneous(3, {{0, 1}, {1, 2}, {0, 2}});
  EgoNet ego = egonet(g, 0, 2);
  auto paths = enumerate_paths(ego, MetapathSchema::wildcard(2));
  std::vector<std::vector<NodeId>> expected{{0, 1, 2}, {0, 2, 1}};
  CHECK(node_sequences(paths) == expected);
}

TEST_CASE("star head splits weight uniformly over leaves") {
  HinGraph g = make_homogeneous(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  EgoNet ego = egonet(g, 0, 2);
  auto weighted = enumerate_weighted_paths(ego, MetapathSchema::wildcard(2));
  REQUIRE(weighted.size() == 4);
  for (const auto& wp : weighted) CHECK(wp.weight == 0.25);
}

TEST_CASE("enumeration matches the brute-force oracle on random small graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    GraphModelParams params;
    params.model = trial % 2 == 0 ? GraphModel::ErdosRenyi : GraphModel::BarabasiAlbert;
    params.nodes = 4 + static_cast<int>(rng() % 5);
    params.er_p = 0.4;
    params.ba_m = 1 + static_cast<int>(rng() % 2);
    if (params.ba_m >= params.nodes) params.ba_m = 1;
    params.seed = rng();
    HinGraph g = generate(params);
    const int n = 1 + static_cast<int>(rng() % 3);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      EgoNet ego = egonet(g, v, n);
      auto got = node_sequences(enumerate_paths(ego, MetapathSchema::wildcard(n)));
      std::sort(got.begin(), got.end());
      CHECK(got == brute_force_max_paths(ego, n));
    }
  }
}

TEST_CASE("weights sum to one for every head on random graphs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    GraphModelParams params;
    params.model = GraphModel::ErdosRenyi;
    params.nodes = 20;
    params.er_p = 0.15;
    params.seed = rng();
    HinGraph g = generate(params);
    const int n = 1 + trial % 3;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      auto weighted = enumerate_weighted_paths(egonet(g, v, n), MetapathSchema::wildcard(n));
      double sum = 0.0;
      for (const auto& wp : weighted) sum += wp.weight;
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("metapath sequences restrict enumeration to admissible prefixes") {
  HinGraph g = make_hub_graph();
  EgoNet ego = egonet(g, 0, 2);

  MetapathSchema to_admin = MetapathSchema::with_sequences({{"company", "rel", "admin"}}, 2);
  auto paths = enumerate_paths(ego, to_admin);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].nodes == std::vector<NodeId>{0, 1});
  CHECK(paths[0].dead_end);
  CHECK(path_weight(ego, paths[0], to_admin) == 1.0);

  // restricted results are a subset of the wildcard set
  auto wild = node_sequences(enumerate_paths(ego, MetapathSchema::wildcard(2)));
  std::set<std::vector<NodeId>> wild_set(wild.begin(), wild.end());
  MetapathSchema two_hop =
      MetapathSchema::with_sequences({{"company", "rel", "company", "rel", "company"}}, 2);
  for (const auto& p : enumerate_paths(ego, two_hop)) {
    for (NodeId v : p.nodes) CHECK(g.node_type(v) == g.schema().node_type_index("company"));
    if (p.length() == 2) CHECK(wild_set.count(p.nodes) == 1);
  }
}

TEST_CASE("parallel edges of different types are distinct walk continuations") {
  NodeTypeDef t{"t", {{"x", false}}};
  EdgeTypeDef owns{"owns", "t", "t", {}};
  EdgeTypeDef manages{"manages", "t", "t", {}};
  GraphSchema schema({t}, {owns, manages});
  std::vector<NodeInput> nodes{{"a", "t", {1.0}, 1}, {"b", "t", {2.0}, 0}};
  std::vector<EdgeInput> edges{{"a", "b", "owns", {}}, {"a", "b", "manages", {}}};
  HinGraph g = build_graph(schema, nodes, edges);
  REQUIRE(g.num_edges() == 2);

  EgoNet ego = egonet(g, 0, 1);
  MetapathSchema wild = MetapathSchema::wildcard(1);
  auto weighted = enumerate_weighted_paths(ego, wild);
  REQUIRE(weighted.size() == 2);
  CHECK(weighted[0].path.nodes == weighted[1].path.nodes);
  CHECK(weighted[0].path.edges != weighted[1].path.edges);
  CHECK(weighted[0].weight == 0.5);
  CHECK(weighted[1].weight == 0.5);
  CHECK(path_weight(ego, weighted[0].path, wild) == 0.5);

  // restricting to one edge type collapses the choice and renormalizes
  MetapathSchema only_owns = MetapathSchema::with_sequences({{"t", "owns", "t"}}, 1);
  auto restricted = enumerate_weighted_paths(ego, only_owns);
  REQUIRE(restricted.size() == 1);
  CHECK(g.edge(restricted[0].path.edges[0]).type == g.schema().edge_type_index("owns"));
  CHECK(restricted[0].weight == 1.0);
}

TEST_CASE("head type outside every sequence still yields the singleton path") {
  HinGraph g = make_hub_graph();
  EgoNet ego = egonet(g, g.node_id("1"), 2);  // admin head
  MetapathSchema schema = MetapathSchema::with_sequences({{"company", "rel", "admin"}}, 2);
  auto paths = enumerate_paths(ego, schema);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].nodes == std::vector<NodeId>{g.node_id("1")});
}

TEST_CASE("enumeration is deterministic") {
  HinGraph g = make_hub_graph();
  EgoNet ego = egonet(g, 0, 2);
  auto a = enumerate_weighted_paths(ego, MetapathSchema::wildcard(2));
  auto b = enumerate_weighted_paths(ego, MetapathSchema::wildcard(2));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].path.nodes == b[i].path.nodes);
    CHECK(a[i].path.edges == b[i].path.edges);
    CHECK(a[i].weight == b[i].weight);
  }
}

TEST_CASE("path caps fail loudly instead of truncating") {
  HinGraph g = make_hub_graph();
  EgoNet ego = egonet(g, 0, 2);
  PathLimits limits;
  limits.max_paths_per_head = 3;
  CHECK_THROWS_WITH_AS(enumerate_paths(ego, MetapathSchema::wildcard(2), limits),
                       doctest::Contains("path cap"), ValidationError);
  PathLimits node_cap;
  node_cap.max_egonet_nodes = 4;
  CHECK_THROWS_WITH_AS(enumerate_paths(ego, MetapathSchema::wildcard(2), node_cap),
                       doctest::Contains("ego-net node cap"), ValidationError);
}

TEST_CASE("column layout width and naming") {
  HinGraph g = make_hub_graph();
  ColumnLayout layout = ColumnLayout::build(g.schema(), 2);
  // head: company(2) + admin(1); per level: rel(1) + company(2) + admin(1)
  CHECK(layout.width() == 3 + 2 * (1 + 3));
  CHECK(layout.columns()[0].name == "H.company.size");
  CHECK(layout.columns()[2].name == "H.admin.age");
  CHECK(layout.columns()[3].name == "E1.rel.strength");
  CHECK(layout.columns()[4].name == "N1.company.size");
  CHECK(layout.columns()[7].name == "E2.rel.strength");
  std::set<std::string> names;
  for (const auto& c : layout.columns()) names.insert(c.name);
  CHECK(names.size() == static_cast<std::size_t>(layout.width()));
  CHECK(ColumnLayout::build(g.schema(), 2).digest() == layout.digest());
  CHECK(ColumnLayout::build(g.schema(), 1).digest() != layout.digest());
}

TEST_CASE("featurized dead-end path leaves later levels entirely missing") {
  HinGraph g = make_hub_graph();
  EgoNet ego = egonet(g, 0, 2);
  auto paths = enumerate_paths(ego, MetapathSchema::wildcard(2));
  ColumnLayout layout = ColumnLayout::build(g.schema(), 2);
  const SimplePath& dead = paths[2];  // (0,3)
  REQUIRE(dead.nodes == std::vector<NodeId>{0, 3});
  FeatureRow row = featurize_path(g, dead, layout);
  for (int c = 0; c < layout.width(); ++c)
    if (layout.columns()[c].level == 2) CHECK(row.missing(c) == 1);
  // level-1 company block holds node 3's features, admin block stays missing
  CHECK(row.values(layout.node_offset(1, 0)) == 3.5);
  CHECK(row.missing(layout.node_offset(1, 0)) == 0);
  CHECK(row.missing(layout.node_offset(1, 1)) == 1);
}

TEST_CASE("homogeneous single-feature graph featurizes to the plain value sequence") {
  HinGraph g = make_homogeneous(3, {{0, 1}, {1, 2}}, {1.0, 2.0, 3.0});
  EgoNet ego = egonet(g, 0, 2);
  auto paths = enumerate_paths(ego, MetapathSchema::wildcard(2));
  REQUIRE(paths.size() == 1);
  ColumnLayout layout = ColumnLayout::build(g.schema(), 2);
  FeatureRow row = featurize_path(g, paths[0], layout);
  REQUIRE(layout.width() == 3);  // the edge type carries no features
  CHECK(row.values(0) == 1.0);
  CHECK(row.values(1) == 2.0);
  CHECK(row.values(2) == 3.0);
  CHECK(row.missing.sum() == 0);
}

TEST_CASE("type blocks are exclusive per slot") {
  HinGraph g = make_hub_graph();
  EgoNet ego = egonet(g, 0, 2);
  ColumnLayout layout = ColumnLayout::build(g.schema(), 2);
  auto paths = enumerate_paths(ego, MetapathSchema::wildcard(2));
  const SimplePath& via_admin = paths[0];  // (0,1,6): admin at level 1
  FeatureRow row = featurize_path(g, via_admin, layout);
  CHECK(row.missing(layout.node_offset(1, 1)) == 0);  // admin block filled
  CHECK(row.missing(layout.node_offset(1, 0)) == 1);  // company block missing
  CHECK(row.values(layout.node_offset(1, 1)) == 1.25);
}

TEST_CASE("featurize rejects graphs whose types are absent from the layout") {
  HinGraph g = make_hub_graph();
  ColumnLayout other = ColumnLayout::build(GraphSchema::homogeneous(), 2);
  EgoNet ego = egonet(g, 0, 1);
  auto paths = enumerate_paths(ego, MetapathSchema::wildcard(1));
  CHECK_THROWS_WITH_AS(featurize_path(g, paths[0], other), doctest::Contains("not present"),
                       ValidationError);
}

TEST_CASE("build_dataset with radius zero is one unit-weight row per head") {
  HinGraph base = make_homogeneous(4, {{0, 1}, {1, 2}, {2, 3}}, {0.5, 1.5, 2.5, 3.5});
  std::vector<std::int8_t> labels{1, 0, 1, 0};
  HinGraph g = base.relabeled(labels);
  std::vector<NodeId> heads{0, 1, 2, 3};
  PathDataset ds = build_dataset(g, heads, 0, MetapathSchema::wildcard(0));
  REQUIRE(ds.rows() == 4);
  CHECK(ds.cols() == 1);
  for (int r = 0; r < 4; ++r) {
    CHECK(ds.weights(r) == 1.0);
    CHECK(ds.values(r, 0) == g.node_features(r)(0));
    CHECK(static_cast<int>(ds.labels[r]) == static_cast<int>(labels[r]));
  }
}

TEST_CASE("build_dataset on the hub head produces six weighted rows with the head label") {
  HinGraph g = make_hub_graph();
  std::vector<NodeId> heads{0};
  PathDataset ds = build_dataset(g, heads, 2, MetapathSchema::wildcard(2));
  REQUIRE(ds.rows() == 6);
  double sum = 0.0;
  for (int r = 0; r < ds.rows(); ++r) {
    CHECK(ds.heads[r] == 0);
    CHECK(ds.labels[r] == 1);
    sum += ds.weights(r);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ds.weights(0) == doctest::Approx(0.2));
  CHECK(ds.weights(3) == doctest::Approx(0.1));
}

TEST_CASE("two isolated labeled nodes form a plain tabular dataset") {
  HinGraph base = make_homogeneous(2, {}, {1.0, -1.0});
  HinGraph g = base.relabeled(std::vector<std::int8_t>{1, 0});
  std::vector<NodeId> heads{0, 1};
  PathDataset ds = build_dataset(g, heads, 2, MetapathSchema::wildcard(2));
  REQUIRE(ds.rows() == 2);
  for (int r = 0; r < 2; ++r) {
    CHECK(ds.weights(r) == 1.0);
    CHECK(ds.values(r, 0) == g.node_features(r)(0));
    for (int c = 1; c < ds.cols(); ++c) CHECK(ds.is_missing(r, c));
  }
}

TEST_CASE("build_dataset rejects unlabeled heads") {
  HinGraph g = make_homogeneous(2, {{0, 1}}, {0.0, 1.0});
  std::vector<NodeId> heads{0};
  CHECK_THROWS_WITH_AS(build_dataset(g, heads, 1, MetapathSchema::wildcard(1)),
                       doctest::Contains("unlabeled head"), ValidationError);
}

TEST_CASE("build_dataset output is independent of the worker count") {
  HinGraph g = make_hub_graph();
  std::vector<std::int8_t> labels(10, 0);
  for (int i : {0, 2, 4}) labels[i] = 1;
  HinGraph lg = g.relabeled(labels);
  std::vector<NodeId> heads(10);
  std::iota(heads.begin(), heads.end(), 0);
  PathDataset one = build_dataset(lg, heads, 2, MetapathSchema::wildcard(2), {}, 1);
  PathDataset four = build_dataset(lg, heads, 2, MetapathSchema::wildcard(2), {}, 4);
  REQUIRE(one.rows() == four.rows());
  CHECK(one.values == four.values);
  CHECK(one.weights == four.weights);
  CHECK(one.heads == four.heads);
}
