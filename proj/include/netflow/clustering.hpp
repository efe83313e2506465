#ifndef NETFLOW_CLUSTERING_HPP
#define NETFLOW_CLUSTERING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netflow/errors.hpp"
#include "netflow/flow_distance.hpp"
#include "netflow/rng.hpp"

namespace netflow {

struct SimilarityMatrix {
  Eigen::MatrixXd entries;  // exp(-d/sigma), ones on the diagonal
  double sigma = 0.0;
  std::string source_metric;
};

// Gaussian-style similarity S_ij = exp(-d_ij / sigma) with sigma the
// population standard deviation of the off-diagonal distances. A distance
// matrix with no spread carries no scale, hence the degenerate-input error.
inline SimilarityMatrix similarity_matrix(const DistanceMatrix& d) {
  const Eigen::Index m = d.entries.rows();
  if (m < 2) throw InputError("need at least two graphs");
  double mean = 0.0;
  const double count = static_cast<double>(m * (m - 1));
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (i != j) mean += d.entries(i, j);
  mean /= count;
  double var = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (i != j) {
        const double c = d.entries(i, j) - mean;
        var += c * c;
      }
  const double sigma = std::sqrt(var / count);
  if (sigma == 0.0)
    throw DegenerateInputError(
        "all pairwise distances equal; similarity scale undefined");

  SimilarityMatrix s{Eigen::MatrixXd(m, m), sigma, d.metric};
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      s.entries(i, j) = i == j ? 1.0 : std::exp(-d.entries(i, j) / sigma);
  return s;
}

// Self-distances dominate row clustering if left at zero; swap each
// diagonal entry for the mean of the rest of its row.
inline Eigen::MatrixXd replace_diagonal_with_average(const DistanceMatrix& d) {
  const Eigen::Index m = d.entries.rows();
  if (m < 2) throw InputError("need at least two graphs");
  Eigen::MatrixXd out = d.entries;
  for (Eigen::Index i = 0; i < m; ++i) {
    double mean = 0.0;
    for (Eigen::Index j = 0; j < m; ++j)
      if (j != i) mean += out(i, j);
    out(i, i) = mean / static_cast<double>(m - 1);
  }
  return out;
}

struct ClusterAssignment {
  std::vector<int> labels;  // values in [0, k)
  int k = 0;
  double inertia = 0.0;  // sum of squared distances to assigned centers
};

namespace detail {

inline double sq_dist(const Eigen::MatrixXd& points, Eigen::Index i,
                      const Eigen::MatrixXd& centers, int c) {
  return (points.row(i) - centers.row(c)).squaredNorm();
}

// Standard k-means++ seeding: squared-distance-weighted draws.
inline Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& points, int k,
                                    std::mt19937_64& eng) {
  const Eigen::Index m = points.rows();
  Eigen::MatrixXd centers(k, points.cols());
  centers.row(0) = points.row(uniform_index(eng, static_cast<int>(m)));
  Eigen::VectorXd d2(m);
  for (Eigen::Index i = 0; i < m; ++i)
    d2[i] = sq_dist(points, i, centers, 0);
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = uniform01(eng) * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
        pick = i;
      }
    } else {
      pick = uniform_index(eng, static_cast<int>(m));
    }
    centers.row(c) = points.row(pick);
    for (Eigen::Index i = 0; i < m; ++i)
      d2[i] = std::min(d2[i], sq_dist(points, i, centers, c));
  }
  return centers;
}

// One Lloyd run from k-means++ centers. Ties in assignment go to the lowest
// center index; an emptied cluster is repaired by stealing the point
// farthest from its current center. Optionally records the inertia after
// every assignment step (used by tests to watch the descent).
inline ClusterAssignment lloyd_run(const Eigen::MatrixXd& points, int k,
                                   std::mt19937_64& eng, int max_iters,
                                   std::vector<double>* inertia_trace) {
  const Eigen::Index m = points.rows();
  Eigen::MatrixXd centers = seed_centers(points, k, eng);
  std::vector<int> labels(m, -1);

  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      int best = 0;
      double best_d = sq_dist(points, i, centers, 0);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(points, i, centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
      inertia += best_d;
    }
    if (inertia_trace) inertia_trace->push_back(inertia);

    for (int c = 0; c < k; ++c) {
      if (std::count(labels.begin(), labels.end(), c) > 0) continue;
      Eigen::Index worst = 0;
      double worst_d = -1.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double d = sq_dist(points, i, centers, labels[i]);
        if (d > worst_d && std::count(labels.begin(), labels.end(),
                                      labels[i]) > 1) {
          worst_d = d;
          worst = i;
        }
      }
      labels[worst] = c;
      changed = true;
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < m; ++i) {
      sums.row(labels[i]) += points.row(i);
      ++counts[labels[i]];
    }
    for (int c = 0; c < k; ++c)
      if (counts[c] > 0) centers.row(c) = sums.row(c) / counts[c];

    if (!changed && iter > 0) break;
  }

  ClusterAssignment out{std::move(labels), k, 0.0};
  for (Eigen::Index i = 0; i < m; ++i)
    out.inertia += sq_dist(points, i, centers, out.labels[i]);
  return out;
}

}  // namespace detail

// k-means with k-means++ seeding and multiple restarts; the restart with
// the lowest final inertia wins (first winner on exact ties). Rows of
// `points` are the observations. Fully deterministic in (seed, restarts).
inline ClusterAssignment kmeans(const Eigen::MatrixXd& points, int k,
                                std::uint64_t seed, int restarts = 50,
                                int max_iters = 300) {
  const Eigen::Index m = points.rows();
  if (m == 0) throw InputError("no points");
  if (k < 1 || k > m)
    throw InputError("k must lie in [1, " + std::to_string(m) + "]");
  if (restarts < 1) throw InputError("restarts must be positive");
  if (max_iters < 1) throw InputError("max_iters must be positive");

  ClusterAssignment best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 eng = make_engine(seed, static_cast<std::uint64_t>(r));
    ClusterAssignment run =
        detail::lloyd_run(points, k, eng, max_iters, nullptr);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

// Spectral clustering on a similarity matrix: embed each graph by the
// eigenvectors of the k largest eigenvalues, then k-means in that
// coordinate system. Columns are sign-canonicalized (largest-magnitude
// entry made positive, earliest on ties) so the embedding does not inherit
// the eigensolver's arbitrary sign choices. With a degenerate eigenvalue at
// the cut the embedding still depends on the solver's basis for that
// eigenspace; callers clustering tie-heavy matrices should know their
// output is basis-dependent.
inline ClusterAssignment spectral_cluster(const SimilarityMatrix& s, int k,
                                          std::uint64_t seed,
                                          int restarts = 50) {
  const Eigen::Index m = s.entries.rows();
  if (k < 1 || k > m)
    throw InputError("k must lie in [1, " + std::to_string(m) + "]");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s.entries);
  if (solver.info() != Eigen::Success)
    throw NumericError("similarity eigendecomposition failed");
  Eigen::MatrixXd embedding = solver.eigenvectors().rightCols(k);
  for (Eigen::Index c = 0; c < embedding.cols(); ++c) {
    Eigen::Index arg = 0;
    embedding.col(c).cwiseAbs().maxCoeff(&arg);
    if (embedding(arg, c) < 0.0) embedding.col(c) = -embedding.col(c);
  }
  return kmeans(embedding, k, seed, restarts);
}

// Adjusted Rand index between two flat partitions of the same items.
// 1 = identical, 0 = what chance alone would give; can go negative.
inline double adjusted_rand_index(std::span<const int> a,
                                  std::span<const int> b) {
  if (a.size() != b.size())
    throw DimensionError("partitions label different item counts");
  if (a.empty()) throw InputError("empty partitions");
  auto relabel = [](std::span<const int> v) {
    std::vector<int> out(v.size());
    std::vector<int> seen;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto it = std::find(seen.begin(), seen.end(), v[i]);
      if (it == seen.end()) {
        seen.push_back(v[i]);
        out[i] = static_cast<int>(seen.size()) - 1;
      } else {
        out[i] = static_cast<int>(it - seen.begin());
      }
    }
    return std::pair{out, static_cast<int>(seen.size())};
  };
  const auto [la, ka] = relabel(a);
  const auto [lb, kb] = relabel(b);

  std::vector<std::vector<long long>> table(ka,
                                            std::vector<long long>(kb, 0));
  for (std::size_t i = 0; i < la.size(); ++i) ++table[la[i]][lb[i]];
  auto choose2 = [](long long x) { return x * (x - 1) / 2; };

  long long sum_ij = 0;
  std::vector<long long> row_sums(ka, 0), col_sums(kb, 0);
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j) {
      sum_ij += choose2(table[i][j]);
      row_sums[i] += table[i][j];
      col_sums[j] += table[i][j];
    }
  long long sum_a = 0, sum_b = 0;
  for (long long r : row_sums) sum_a += choose2(r);
  for (long long c : col_sums) sum_b += choose2(c);
  const double pairs = static_cast<double>(choose2(
      static_cast<long long>(la.size())));
  const double expected = static_cast<double>(sum_a) *
                          static_cast<double>(sum_b) / pairs;
  const double maximum =
      0.5 * static_cast<double>(sum_a + sum_b);
  if (maximum == expected)
    return 1.0;  // both partitions trivial and identical
  return (static_cast<double>(sum_ij) - expected) / (maximum - expected);
}

inline double adjusted_rand_index(const ClusterAssignment& a,
                                  std::span<const int> truth) {
  return adjusted_rand_index(std::span<const int>(a.labels), truth);
}

}  // namespace netflow

#endif
