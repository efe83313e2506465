#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "netflow/generators.hpp"
#include "netflow/graph.hpp"

using namespace netflow;

namespace {

std::vector<std::pair<int, int>> cross_edges(const Graph& g, int half) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : g.edges())
    if ((e.first < half) != (e.second < half)) out.push_back(e);
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("generators");

TEST_CASE("sbm parameter validation") {
  CHECK_THROWS_AS(two_block_params(10, 10, 1.2, 0.5, 0.1), InputError);
  CHECK_THROWS_AS(two_block_params(10, 10, 0.5, -0.1, 0.1), InputError);
  CHECK_THROWS_AS(two_block_params(0, 10, 0.5, 0.5, 0.1), InputError);
  SbmParams asym;
  asym.block_sizes = {2, 2};
  asym.link_probs.resize(2, 2);
  asym.link_probs << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_AS(sample_sbm(asym, 1), InputError);
  SbmParams wrong_shape;
  wrong_shape.block_sizes = {2, 2};
  wrong_shape.link_probs = Eigen::MatrixXd::Constant(1, 1, 0.5);
  CHECK_THROWS_AS(sample_sbm(wrong_shape, 1), DimensionError);
}

TEST_CASE("degenerate probabilities give complete and empty graphs") {
  SbmParams complete;
  complete.block_sizes = {6};
  complete.link_probs = Eigen::MatrixXd::Constant(1, 1, 1.0);
  CHECK(sample_sbm(complete, 9).edge_count() == 15);
  SbmParams empty = complete;
  empty.link_probs(0, 0) = 0.0;
  CHECK(sample_sbm(empty, 9).edge_count() == 0);
  const Graph only_bridges =
      sample_sbm(two_block_params(3, 3, 0.0, 0.0, 1.0), 4);
  CHECK(only_bridges.edge_count() == 9);
  CHECK(cross_edges(only_bridges, 3).size() == 9);
}

TEST_CASE("sampling is deterministic in the seed") {
  const SbmParams params = two_block_params(10, 10, 0.75, 0.6, 0.04);
  CHECK(sample_sbm(params, 7) == sample_sbm(params, 7));
  CHECK_FALSE(sample_sbm(params, 7) == sample_sbm(params, 8));
}

TEST_CASE("mean edge count matches the binomial expectation") {
  // 90 within pairs at 0.8 plus 100 cross pairs at 0.05: expectation 77,
  // per-draw variance 90*0.8*0.2 + 100*0.05*0.95 = 19.15
  const SbmParams params = two_block_params(10, 10, 0.8, 0.8, 0.05);
  const int draws = 1000;
  double total = 0.0;
  for (int seed = 0; seed < draws; ++seed)
    total += sample_sbm(params, seed).edge_count();
  const double mean = total / draws;
  const double se = std::sqrt(19.15 / draws);
  CHECK(std::abs(mean - 77.0) <= 3.0 * se);
}

TEST_CASE("bridge deletion scenario structure") {
  const SbmParams params = two_block_params(10, 10, 0.75, 0.6, 0.04);
  for (std::uint64_t seed : {1, 2, 5}) {
    const ScenarioBundle bundle = bridge_deletion_scenario(params, seed);
    REQUIRE(bundle.graphs.size() == 7);
    CHECK(bundle.labels == std::vector<std::string>{"G1", "G2", "G3", "G4",
                                                    "G5", "G6", "G7"});
    CHECK(bundle.ground_truth == std::vector<int>{0, 1, 0, 0, 0, 0, 1});
    CHECK(bundle.block_sizes == std::vector<int>{10, 10});

    const Graph& parent = bundle.graphs[0];
    CHECK(is_connected(parent));
    const auto bridges = cross_edges(parent, 10);
    REQUIRE(bridges.size() == 2);
    const std::set<int> endpoints{bridges[0].first, bridges[0].second,
                                  bridges[1].first, bridges[1].second};
    CHECK(endpoints.size() == 4);  // vertex-disjoint bridges

    std::set<int> touched;  // endpoints of every removed edge
    for (int k = 1; k < 7; ++k) {
      const Graph& child = bundle.graphs[k];
      CHECK(hamming_distance(parent, child) == 1);
      CHECK(child.edge_count() == parent.edge_count() - 1);
      CHECK(is_connected(child));
      // recover the removed edge
      for (const auto& [u, v] : parent.edges()) {
        if (!child.has_edge(u, v)) {
          touched.insert(u);
          touched.insert(v);
          const bool cross = (u < 10) != (v < 10);
          CHECK(cross == (k == 1 || k == 5));  // G2 and G6 lose the bridges
        }
      }
    }
    CHECK(touched.size() == 12);  // six removals, all vertex-disjoint
    for (int i = 1; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j)
        CHECK(hamming_distance(bundle.graphs[i], bundle.graphs[j]) == 2);

    // same seed reproduces the bundle
    const ScenarioBundle again = bridge_deletion_scenario(params, seed);
    for (int k = 0; k < 7; ++k) CHECK(bundle.graphs[k] == again.graphs[k]);
  }
}

TEST_CASE("bridge deletion gives up on unsatisfiable parameters") {
  // zero inter-block probability never yields two bridges
  const SbmParams params = two_block_params(5, 5, 0.9, 0.9, 0.0);
  CHECK_THROWS_AS(bridge_deletion_scenario(params, 1, 25), ScenarioError);
  CHECK_THROWS_AS(bridge_deletion_scenario(params, 1, 0), InputError);
  SbmParams three_blocks;
  three_blocks.block_sizes = {3, 3, 3};
  three_blocks.link_probs = Eigen::MatrixXd::Constant(3, 3, 0.5);
  CHECK_THROWS_AS(bridge_deletion_scenario(three_blocks, 1), InputError);
}

TEST_CASE("adding bridges touches every graph and checks preconditions") {
  const ScenarioBundle bundle = bridge_deletion_scenario(
      two_block_params(10, 10, 0.75, 0.6, 0.04), 3);
  // first cross pair missing from the parent (hence from every child)
  std::pair<int, int> fresh{-1, -1};
  for (int u = 0; u < 10 && fresh.first < 0; ++u)
    for (int v = 10; v < 20 && fresh.first < 0; ++v)
      if (!bundle.graphs[0].has_edge(u, v)) fresh = {u, v};
  REQUIRE(fresh.first >= 0);

  const std::vector<std::pair<int, int>> pairs{fresh};
  const ScenarioBundle more = add_bridges_variant(bundle, pairs);
  for (std::size_t k = 0; k < more.graphs.size(); ++k) {
    CHECK(more.graphs[k].has_edge(fresh.first, fresh.second));
    CHECK(more.graphs[k].edge_count() ==
          bundle.graphs[k].edge_count() + 1);
  }
  CHECK(more.labels == bundle.labels);
  CHECK(more.ground_truth == bundle.ground_truth);

  // a pair present somewhere is refused, as is a within-block pair
  const auto parent_bridge = cross_edges(bundle.graphs[0], 10).front();
  const std::vector<std::pair<int, int>> existing{parent_bridge};
  CHECK_THROWS_AS(add_bridges_variant(bundle, existing), StateError);
  std::pair<int, int> within{-1, -1};
  for (int u = 0; u < 10 && within.first < 0; ++u)
    for (int v = u + 1; v < 10 && within.first < 0; ++v)
      if (!bundle.graphs[0].has_edge(u, v)) within = {u, v};
  REQUIRE(within.first >= 0);
  const std::vector<std::pair<int, int>> bad{within};
  CHECK_THROWS_AS(add_bridges_variant(bundle, bad), InputError);
  CHECK_THROWS_AS(add_bridges_variant(ScenarioBundle{}, pairs), InputError);
}

TEST_CASE("fixed bridge scenario: deterministic bridge pattern") {
  const ScenarioBundle bundle = fixed_bridge_scenario(0.8, 5);
  REQUIRE(bundle.graphs.size() == 20);
  CHECK(bundle.block_sizes == std::vector<int>{10, 10});
  for (int g = 0; g < 20; ++g) {
    CHECK(bundle.ground_truth[g] == (g < 10 ? 0 : 1));
    const int want = g < 10 ? 5 : 10;
    std::vector<std::pair<int, int>> expect;
    for (int k = 0; k < want; ++k) expect.emplace_back(k, 10 + k);
    CHECK(cross_edges(bundle.graphs[g], 10) == expect);
  }
  const ScenarioBundle again = fixed_bridge_scenario(0.8, 5);
  for (int g = 0; g < 20; ++g) CHECK(bundle.graphs[g] == again.graphs[g]);
  CHECK_THROWS_AS(fixed_bridge_scenario(1.5, 1), InputError);
}

TEST_CASE("two-SBM scenario separates the populations in expectation") {
  REQUIRE(two_sbm_scenario(1).graphs.size() == 20);
  const ScenarioBundle bundle = two_sbm_scenario(1);
  CHECK(bundle.ground_truth ==
        std::vector<int>{0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                         1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
  double sparse = 0.0, dense = 0.0;
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    const ScenarioBundle b = two_sbm_scenario(seed);
    for (int g = 0; g < 10; ++g)
      sparse += cross_edges(b.graphs[g], 10).size();
    for (int g = 10; g < 20; ++g)
      dense += cross_edges(b.graphs[g], 10).size();
  }
  sparse /= seeds * 10;
  dense /= seeds * 10;
  // per-graph variances: 100 p (1-p) = 4.75 and 9.0
  CHECK(std::abs(sparse - 5.0) <= 3.0 * std::sqrt(4.75 / (seeds * 10)));
  CHECK(std::abs(dense - 10.0) <= 3.0 * std::sqrt(9.0 / (seeds * 10)));
}

TEST_SUITE_END();
