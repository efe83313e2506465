#ifndef NETFLOW_GENERATORS_HPP
#define NETFLOW_GENERATORS_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netflow/errors.hpp"
#include "netflow/graph.hpp"
#include "netflow/rng.hpp"

namespace netflow {

struct SbmParams {
  std::vector<int> block_sizes;
  Eigen::MatrixXd link_probs;  // symmetric, entries in [0, 1]

  int node_count() const {
    int n = 0;
    for (int b : block_sizes) n += b;
    return n;
  }

  int block_of(int node) const {
    int offset = 0;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
      offset += block_sizes[b];
      if (node < offset) return static_cast<int>(b);
    }
    throw InputError("node index out of range");
  }

  void validate() const {
    if (block_sizes.empty()) throw InputError("need at least one block");
    for (int b : block_sizes)
      if (b <= 0) throw InputError("block sizes must be positive");
    const auto k = static_cast<Eigen::Index>(block_sizes.size());
    if (link_probs.rows() != k || link_probs.cols() != k)
      throw DimensionError("link_probs must be " + std::to_string(k) + "x" +
                           std::to_string(k));
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) {
        if (link_probs(i, j) < 0.0 || link_probs(i, j) > 1.0)
          throw InputError("link probabilities must lie in [0, 1]");
        if (link_probs(i, j) != link_probs(j, i))
          throw InputError("link_probs must be symmetric");
      }
  }
};

inline SbmParams two_block_params(int size1, int size2, double p11, double p22,
                                  double p12) {
  SbmParams p;
  p.block_sizes = {size1, size2};
  p.link_probs.resize(2, 2);
  p.link_probs << p11, p12, p12, p22;
  p.validate();
  return p;
}

// One uniform variate per unordered pair, row-major over the upper
// triangle; edge present iff the variate falls below the block pair's
// probability. Fully pinned by the seed.
inline Graph sample_sbm(const SbmParams& params, std::uint64_t seed) {
  params.validate();
  const int n = params.node_count();
  std::mt19937_64 eng = make_engine(seed);
  GraphBuilder g(n);
  for (int u = 0; u < n; ++u) {
    const int bu = params.block_of(u);
    for (int v = u + 1; v < n; ++v) {
      if (uniform01(eng) < params.link_probs(bu, params.block_of(v)))
        g.add(u, v);
    }
  }
  return g.take();
}

// A family of related graphs plus the labels/partition the scenario implies.
struct ScenarioBundle {
  std::vector<Graph> graphs;
  std::vector<std::string> labels;
  std::vector<int> ground_truth;  // may be empty for unlabeled bundles
  std::vector<int> block_sizes;   // empty when no block structure applies

  int block_of(int node) const {
    int offset = 0;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
      offset += block_sizes[b];
      if (node < offset) return static_cast<int>(b);
    }
    throw InputError("node index out of range");
  }
};

namespace detail {

// Connected components of the block-internal subgraph containing `nodes`.
inline int block_component_count(const Graph& g, std::span<const int> nodes,
                                 std::pair<int, int> skip_edge) {
  const int m = static_cast<int>(nodes.size());
  std::vector<int> pos(g.node_count(), -1);
  for (int i = 0; i < m; ++i) pos[nodes[i]] = i;
  std::vector<char> seen(m, 0);
  int components = 0;
  for (int start = 0; start < m; ++start) {
    if (seen[start]) continue;
    ++components;
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < m; ++j) {
        if (seen[j] || !g.has_edge(nodes[i], nodes[j])) continue;
        int a = std::min(nodes[i], nodes[j]), b = std::max(nodes[i], nodes[j]);
        if (std::pair{a, b} == skip_edge) continue;
        seen[j] = 1;
        stack.push_back(j);
      }
    }
  }
  return components;
}

}  // namespace detail

// The bridge-deletion family: resample a two-block parent until it is
// connected with exactly two vertex-disjoint inter-block edges, then form
// six children by deleting single edges. Children 2 and 6 lose the bridges
// (lexicographic order); children 3, 4, 5 and 7 lose within-block edges,
// chosen lexicographically-first among edges that are not cut edges of
// their block and share no endpoint with the bridges or with each other.
// The disjointness keeps every pair of deletions four Laplacian entries
// apart, which is what gives the exact distance ties this family is for.
inline ScenarioBundle bridge_deletion_scenario(const SbmParams& params,
                                               std::uint64_t seed,
                                               int max_attempts = 10000) {
  params.validate();
  if (params.block_sizes.size() != 2)
    throw InputError("bridge scenario needs exactly two blocks");
  if (max_attempts < 1) throw InputError("max_attempts must be positive");

  const int n = params.node_count();
  std::vector<int> block_nodes[2];
  for (int u = 0; u < n; ++u)
    block_nodes[params.block_of(u)].push_back(u);

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Graph parent = sample_sbm(params, derive_seed(seed, attempt));

    std::vector<std::pair<int, int>> bridges;
    for (const auto& e : parent.edges())
      if (params.block_of(e.first) != params.block_of(e.second))
        bridges.push_back(e);
    if (bridges.size() != 2) continue;
    if (!is_connected(parent)) continue;
    const auto& b1 = bridges[0];
    const auto& b2 = bridges[1];
    if (b1.first == b2.first || b1.second == b2.second ||
        b1.first == b2.second || b1.second == b2.first)
      continue;

    std::vector<char> used(n, 0);
    used[b1.first] = used[b1.second] = used[b2.first] = used[b2.second] = 1;
    std::vector<std::pair<int, int>> within;
    for (const auto& [u, v] : parent.edges()) {
      if (within.size() == 4) break;
      const int block = params.block_of(u);
      if (block != params.block_of(v)) continue;
      if (used[u] || used[v]) continue;
      const auto& nodes = block_nodes[block];
      if (detail::block_component_count(parent, nodes, {u, v}) !=
          detail::block_component_count(parent, nodes, {-1, -1}))
        continue;  // cut edge of its block
      within.emplace_back(u, v);
      used[u] = used[v] = 1;
    }
    if (within.size() < 4) continue;

    ScenarioBundle bundle;
    bundle.block_sizes = params.block_sizes;
    bundle.graphs = {parent,
                     remove_edge(parent, bridges[0].first, bridges[0].second),
                     remove_edge(parent, within[0].first, within[0].second),
                     remove_edge(parent, within[1].first, within[1].second),
                     remove_edge(parent, within[2].first, within[2].second),
                     remove_edge(parent, bridges[1].first, bridges[1].second),
                     remove_edge(parent, within[3].first, within[3].second)};
    bundle.ground_truth = {0, 1, 0, 0, 0, 0, 1};
    for (int i = 1; i <= 7; ++i)
      bundle.labels.push_back("G" + std::to_string(i));
    return bundle;
  }
  throw ScenarioError("no admissible parent graph in " +
                      std::to_string(max_attempts) + " attempts");
}

// Same family with extra inter-block edges added to every member, used to
// study how extra bridges dilute the bridge-deletion signal. Each new pair
// must cross the blocks and be absent from every graph in the bundle.
inline ScenarioBundle add_bridges_variant(
    const ScenarioBundle& bundle,
    std::span<const std::pair<int, int>> new_bridges) {
  if (bundle.graphs.empty()) throw InputError("empty bundle");
  ScenarioBundle out = bundle;
  for (const auto& [u, v] : new_bridges) {
    if (!bundle.block_sizes.empty() &&
        bundle.block_of(u) == bundle.block_of(v))
      throw InputError("added pair (" + std::to_string(u) + ", " +
                       std::to_string(v) + ") does not cross blocks");
    for (std::size_t i = 0; i < out.graphs.size(); ++i) {
      if (out.graphs[i].has_edge(u, v))
        throw StateError("pair (" + std::to_string(u) + ", " +
                         std::to_string(v) + ") already present in " +
                         out.labels[i]);
      out.graphs[i] = add_edge(out.graphs[i], u, v);
    }
  }
  return out;
}

// Twenty two-block graphs with iid within-block edges (probability p) and a
// deterministic bridge pattern (k, 10+k): the first ten graphs carry five
// bridges, the last ten all ten. Group membership is the ground truth.
inline ScenarioBundle fixed_bridge_scenario(double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw InputError("p must lie in [0, 1]");
  const int half = 10, n = 2 * half, count = 20;
  ScenarioBundle bundle;
  bundle.block_sizes = {half, half};
  for (int g = 0; g < count; ++g) {
    std::mt19937_64 eng = make_engine(seed, static_cast<std::uint64_t>(g));
    GraphBuilder builder(n);
    // Within-block pairs row-major; cross pairs draw nothing.
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if ((u < half) == (v < half) && uniform01(eng) < p) builder.add(u, v);
    const int bridges = g < count / 2 ? 5 : 10;
    for (int k = 0; k < bridges; ++k) builder.add(k, half + k);
    bundle.graphs.push_back(builder.take());
    bundle.labels.push_back("G" + std::to_string(g + 1));
    bundle.ground_truth.push_back(g < count / 2 ? 0 : 1);
  }
  return bundle;
}

// Twenty draws from two SBM populations that differ only in the inter-block
// probability (0.05 vs 0.10); within-block probability 0.8 on both sides.
inline ScenarioBundle two_sbm_scenario(std::uint64_t seed) {
  const SbmParams sparse = two_block_params(10, 10, 0.8, 0.8, 0.05);
  const SbmParams dense = two_block_params(10, 10, 0.8, 0.8, 0.10);
  ScenarioBundle bundle;
  bundle.block_sizes = {10, 10};
  for (int g = 0; g < 20; ++g) {
    bundle.graphs.push_back(
        sample_sbm(g < 10 ? sparse : dense, derive_seed(seed, g)));
    bundle.labels.push_back("G" + std::to_string(g + 1));
    bundle.ground_truth.push_back(g < 10 ? 0 : 1);
  }
  return bundle;
}

}  // namespace netflow

#endif
