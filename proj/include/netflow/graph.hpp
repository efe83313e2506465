#ifndef NETFLOW_GRAPH_HPP
#define NETFLOW_GRAPH_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netflow/errors.hpp"

namespace netflow {

// Simple undirected graph on nodes 0..n-1, no self loops, no multi-edges.
// Dense bitmap storage: the graphs of interest here are small (tens of
// nodes) and dense enough that adjacency lists buy nothing.
class Graph {
 public:
  explicit Graph(int node_count) : n_(node_count) {
    if (node_count <= 0) throw InputError("graph needs at least one node");
    adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
  }

  static Graph from_edge_list(int node_count,
                              std::span<const std::pair<int, int>> edges) {
    Graph g(node_count);
    for (const auto& [u, v] : edges) g.set_edge(u, v);
    return g;
  }

  int node_count() const { return n_; }

  bool has_edge(int u, int v) const {
    check_node(u);
    check_node(v);
    return adj_[idx(u, v)] != 0;
  }

  int degree(int u) const {
    check_node(u);
    int d = 0;
    for (int v = 0; v < n_; ++v) d += adj_[idx(u, v)];
    return d;
  }

  int edge_count() const {
    int m = 0;
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v) m += adj_[idx(u, v)];
    return m;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        if (adj_[idx(u, v)]) out.emplace_back(u, v);
    return out;
  }

  Eigen::MatrixXd adjacency_matrix() const {
    Eigen::MatrixXd a(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) a(i, j) = adj_[idx(i, j)];
    return a;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend Graph add_edge(const Graph&, int, int);
  friend Graph remove_edge(const Graph&, int, int);
  friend class GraphBuilder;

  std::size_t idx(int u, int v) const {
    return static_cast<std::size_t>(u) * n_ + v;
  }

  void check_node(int u) const {
    if (u < 0 || u >= n_)
      throw InputError("node index " + std::to_string(u) +
                       " out of range [0, " + std::to_string(n_) + ")");
  }

  void set_edge(int u, int v) {
    check_node(u);
    check_node(v);
    if (u == v)
      throw InputError("self loop at node " + std::to_string(u) +
                       " not allowed");
    if (adj_[idx(u, v)])
      throw StateError("duplicate edge (" + std::to_string(u) + ", " +
                       std::to_string(v) + ")");
    adj_[idx(u, v)] = adj_[idx(v, u)] = 1;
  }

  void clear_edge(int u, int v) {
    check_node(u);
    check_node(v);
    if (u == v || !adj_[idx(u, v)])
      throw StateError("edge (" + std::to_string(u) + ", " +
                       std::to_string(v) + ") not present");
    adj_[idx(u, v)] = adj_[idx(v, u)] = 0;
  }

  int n_;
  std::vector<std::uint8_t> adj_;
};

// Mutating construction path for generators; the public Graph API stays
// value-oriented (edits return copies).
class GraphBuilder {
 public:
  explicit GraphBuilder(int node_count) : g_(node_count) {}
  void add(int u, int v) { g_.set_edge(u, v); }
  bool has(int u, int v) const { return g_.has_edge(u, v); }
  const Graph& get() const { return g_; }
  Graph take() { return std::move(g_); }

 private:
  Graph g_;
};

inline Graph add_edge(const Graph& g, int u, int v) {
  Graph out = g;
  out.set_edge(u, v);
  return out;
}

inline Graph remove_edge(const Graph& g, int u, int v) {
  Graph out = g;
  out.clear_edge(u, v);
  return out;
}

struct LaplacianMatrix {
  Eigen::MatrixXd entries;
  Eigen::Index size() const { return entries.rows(); }
};

// L = D - A. Built from integer degrees, so row sums are exactly zero.
inline LaplacianMatrix laplacian(const Graph& g) {
  const int n = g.node_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    int deg = 0;
    for (int v = 0; v < n; ++v) {
      if (v != u && g.has_edge(u, v)) {
        m(u, v) = -1.0;
        ++deg;
      }
    }
    m(u, u) = deg;
  }
  return {std::move(m)};
}

inline void require_same_size(const Graph& a, const Graph& b) {
  if (a.node_count() != b.node_count())
    throw DimensionError("node counts differ: " +
                         std::to_string(a.node_count()) + " vs " +
                         std::to_string(b.node_count()));
}

// Number of unordered node pairs whose edge indicator differs.
inline int hamming_distance(const Graph& a, const Graph& b) {
  require_same_size(a, b);
  const int n = a.node_count();
  int d = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (a.has_edge(u, v) != b.has_edge(u, v)) ++d;
  return d;
}

// || L(a) - L(b) ||_F, accumulated in integers so single-edge edits give
// exact values (one disjoint edge <-> squared norm 4).
inline double frobenius_laplacian_distance(const Graph& a, const Graph& b) {
  require_same_size(a, b);
  const int n = a.node_count();
  std::int64_t sq = 0;
  for (int u = 0; u < n; ++u) {
    std::int64_t dd = a.degree(u) - b.degree(u);
    sq += dd * dd;
    for (int v = u + 1; v < n; ++v)
      if (a.has_edge(u, v) != b.has_edge(u, v)) sq += 2;
  }
  return std::sqrt(static_cast<double>(sq));
}

inline bool is_connected(const Graph& g) {
  const int n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int found = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      if (!seen[v] && g.has_edge(u, v)) {
        seen[v] = 1;
        ++found;
        stack.push_back(v);
      }
    }
  }
  return found == n;
}

}  // namespace netflow

#endif
