#ifndef NETFLOW_FLOW_DISTANCE_HPP
#define NETFLOW_FLOW_DISTANCE_HPP

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netflow/errors.hpp"
#include "netflow/graph.hpp"
#include "netflow/spectral.hpp"

namespace netflow {

// Uniform sampling of [0, t_max]: n_samples subintervals, n_samples + 1
// points, endpoints hit exactly.
struct TimeGrid {
  double t_max = 0.0;
  int n_samples = 0;
  std::vector<double> samples;
};

inline TimeGrid make_time_grid(double t_max, int n_samples) {
  if (!(t_max > 0.0)) throw InputError("t_max must be positive");
  if (n_samples < 2) throw InputError("n_samples must be at least 2");
  TimeGrid g{t_max, n_samples, {}};
  g.samples.resize(n_samples + 1);
  for (int k = 0; k <= n_samples; ++k)
    g.samples[k] = t_max * static_cast<double>(k) / n_samples;
  return g;
}

inline void require_same_size(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size())
    throw DimensionError("spectra sizes differ: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
}

// exp(-t L1) - exp(-t L2): the flow discrepancy matrix at a single time.
inline Eigen::MatrixXd kernel_difference(const Spectrum& s1,
                                         const Spectrum& s2, double t) {
  require_same_size(s1, s2);
  return detail::KernelEvaluator(s1)(t) - detail::KernelEvaluator(s2)(t);
}

inline double off_diagonal_abs_sum(const Eigen::MatrixXd& m) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) sum += std::abs(m(i, j));
  return sum;
}

struct DistanceResult {
  double total = 0.0;
  Eigen::VectorXd per_node;  // total == per_node.sum() by construction
  TimeGrid grid;
  // Either graph had several components: the heat flow then never mixes
  // globally and the t_max truncation guidance below does not apply.
  bool disconnected_input = false;
};

// Network flow distance: total variation in t of the kernel difference,
// accumulated entrywise over off-diagonal entries on the time grid.
//
// per_node[i] collects the row-i contributions, so the total splits into
// per-node shares; swapping the graphs negates every difference matrix
// entrywise and therefore produces bitwise-identical output.
inline DistanceResult nld_distance(const Spectrum& s1, const Spectrum& s2,
                                   const TimeGrid& grid) {
  require_same_size(s1, s2);
  const Eigen::Index n = s1.size();
  detail::KernelEvaluator e1(s1), e2(s2);

  DistanceResult res;
  res.grid = grid;
  res.per_node = Eigen::VectorXd::Zero(n);
  res.disconnected_input =
      s1.zero_mode_count() > 1 || s2.zero_mode_count() > 1;

  // At t = 0 both kernels are the identity, so the difference is zero by
  // definition; start there instead of evaluating (avoids rounding fuzz).
  Eigen::MatrixXd prev = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd cur;
  bool prev_settled = false;
  for (int k = 1; k <= grid.n_samples; ++k) {
    const double t = grid.samples[k];
    cur = e1(t) - e2(t);
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) row += std::abs(cur(i, j) - prev(i, j));
      res.per_node[i] += row;
    }
    prev.swap(cur);
    // Once every decaying mode of both graphs is dead on two consecutive
    // points, the difference is frozen at its limit and later increments
    // are exactly zero.
    const bool settled = e1.live_modes(t) == 0 && e2.live_modes(t) == 0;
    if (settled && prev_settled) break;
    prev_settled = settled;
  }
  res.total = res.per_node.sum();
  return res;
}

inline DistanceResult nld_distance(const Graph& g1, const Graph& g2,
                                   const TimeGrid& grid) {
  require_same_size(g1, g2);
  return nld_distance(eigendecompose(g1), eigendecompose(g2), grid);
}

// Quadrature reference for nld_distance. The grid scheme above is a Riemann
// sum of integral over t of sum_{i != j} |d/dt (exp(-tL1) - exp(-tL2))_ij|;
// here the derivative is formed exactly from the spectra and integrated with
// composite Simpson on a `refinement`-times-finer grid than the usual 1200
// subintervals. Converges O(h^4), so refinement 10 is already far tighter
// than the scheme itself.
inline double nld_distance_oracle(const Graph& g1, const Graph& g2,
                                  double t_max, int refinement) {
  require_same_size(g1, g2);
  if (!(t_max > 0.0)) throw InputError("t_max must be positive");
  if (refinement < 1) throw InputError("refinement must be at least 1");
  const Spectrum s1 = eigendecompose(g1), s2 = eigendecompose(g2);
  const Eigen::Index n = s1.size();

  // d/dt exp(-tL) = V diag(-lambda e^{-t lambda}) V^T; modes with a
  // negligible factor are skipped (same cutoff policy as the kernels).
  auto derivative = [n](const Spectrum& s, double t) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
      const double lam = s.eigenvalues[m];
      if (lam == 0.0) continue;
      const double w = lam * std::exp(-t * lam);
      if (w < 1e-18) continue;
      d.noalias() -= w * s.eigenvectors.col(m) * s.eigenvectors.col(m).transpose();
    }
    return d;
  };
  auto integrand = [&](double t) {
    return off_diagonal_abs_sum(derivative(s1, t) - derivative(s2, t));
  };

  const long intervals = 1200L * refinement;  // even, as Simpson needs
  const double h = t_max / static_cast<double>(intervals);
  double acc = integrand(0.0) + integrand(t_max);
  for (long k = 1; k < intervals; ++k)
    acc += (k % 2 == 1 ? 4.0 : 2.0) * integrand(h * static_cast<double>(k));
  return acc * h / 3.0;
}

struct GddResult {
  double value = 0.0;
  double t_at_max = 0.0;  // earliest grid point attaining the max
};

// Graph diffusion distance: max over the grid of the Frobenius norm of the
// kernel difference.
inline GddResult gdd_distance(const Spectrum& s1, const Spectrum& s2,
                              const TimeGrid& grid) {
  require_same_size(s1, s2);
  detail::KernelEvaluator e1(s1), e2(s2);
  GddResult res;
  bool prev_settled = false;
  for (int k = 0; k <= grid.n_samples; ++k) {
    const double t = grid.samples[k];
    const double norm = (e1(t) - e2(t)).norm();
    if (norm > res.value) {
      res.value = norm;
      res.t_at_max = t;
    }
    const bool settled = e1.live_modes(t) == 0 && e2.live_modes(t) == 0;
    if (settled && prev_settled) break;  // difference frozen from here on
    prev_settled = settled;
  }
  return res;
}

inline GddResult gdd_distance(const Graph& g1, const Graph& g2,
                              const TimeGrid& grid) {
  require_same_size(g1, g2);
  return gdd_distance(eigendecompose(g1), eigendecompose(g2), grid);
}

// How large t_max must be for the slowest surviving mode of either graph to
// decay below `precision`. Purely advisory; returns 0 when nothing decays.
inline double suggested_t_max(const Spectrum& s1, const Spectrum& s2,
                              double precision) {
  if (!(precision > 0.0) || precision >= 1.0)
    throw InputError("precision must lie in (0, 1)");
  double lam = 0.0;
  for (const Spectrum* s : {&s1, &s2}) {
    const Eigen::Index z = s->zero_mode_count();
    if (z < s->size()) {
      const double l2 = s->eigenvalues[z];
      if (lam == 0.0 || l2 < lam) lam = l2;
    }
  }
  return lam == 0.0 ? 0.0 : std::log(1.0 / precision) / lam;
}

enum class Metric { nld, gdd, hamming, frobenius };

inline std::string metric_name(Metric m) {
  switch (m) {
    case Metric::nld: return "nld";
    case Metric::gdd: return "gdd";
    case Metric::hamming: return "hamming";
    case Metric::frobenius: return "frobenius";
  }
  throw InputError("unknown metric");
}

inline Metric metric_from_name(const std::string& name) {
  if (name == "nld") return Metric::nld;
  if (name == "gdd") return Metric::gdd;
  if (name == "hamming") return Metric::hamming;
  if (name == "frobenius") return Metric::frobenius;
  throw InputError("unknown metric '" + name + "'");
}

inline bool metric_needs_grid(Metric m) {
  return m == Metric::nld || m == Metric::gdd;
}

struct DistanceMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd entries;  // symmetric, nonnegative, zero diagonal
  std::string metric;
};

// All pairwise distances under one metric. Spectra are computed once per
// graph; pairs are scanned in fixed row-major order so the result does not
// depend on any evaluation schedule.
inline DistanceMatrix pairwise_distance_matrix(
    std::span<const Graph> graphs, Metric metric,
    const std::optional<TimeGrid>& grid = std::nullopt,
    std::vector<std::string> labels = {}) {
  const int m = static_cast<int>(graphs.size());
  if (m == 0) throw InputError("need at least one graph");
  for (int i = 1; i < m; ++i) require_same_size(graphs[0], graphs[i]);
  if (metric_needs_grid(metric) && !grid)
    throw InputError("metric '" + metric_name(metric) +
                     "' requires a time grid");
  if (labels.empty()) {
    labels.reserve(m);
    for (int i = 0; i < m; ++i) labels.push_back("G" + std::to_string(i + 1));
  } else if (static_cast<int>(labels.size()) != m) {
    throw InputError("label count does not match graph count");
  }

  std::vector<Spectrum> spectra;
  if (metric_needs_grid(metric)) {
    spectra.reserve(m);
    for (const Graph& g : graphs) spectra.push_back(eigendecompose(g));
  }

  DistanceMatrix out{std::move(labels), Eigen::MatrixXd::Zero(m, m),
                     metric_name(metric)};
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      double d = 0.0;
      switch (metric) {
        case Metric::nld:
          d = nld_distance(spectra[i], spectra[j], *grid).total;
          break;
        case Metric::gdd:
          d = gdd_distance(spectra[i], spectra[j], *grid).value;
          break;
        case Metric::hamming:
          d = hamming_distance(graphs[i], graphs[j]);
          break;
        case Metric::frobenius:
          d = frobenius_laplacian_distance(graphs[i], graphs[j]);
          break;
      }
      out.entries(i, j) = out.entries(j, i) = d;
    }
  }
  return out;
}

}  // namespace netflow

#endif
