#ifndef NETFLOW_SPECTRAL_HPP
#define NETFLOW_SPECTRAL_HPP

#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "netflow/errors.hpp"
#include "netflow/graph.hpp"

namespace netflow {

// Threshold below which a Laplacian eigenvalue is treated as an exact zero
// mode. Connected graphs on a few hundred nodes keep their Fiedler value
// well above this; numerically-zero copies from extra components sit at
// +-1e-15 and get snapped, which makes exp(-t*lambda) exactly 1 for them
// at every t instead of drifting.
inline constexpr double kEigZeroTol = 1e-10;

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending, zero modes snapped to 0.0
  Eigen::MatrixXd eigenvectors;  // orthonormal columns, same order
  Eigen::Index size() const { return eigenvalues.size(); }
  // Zero modes form a prefix of the ascending eigenvalue list.
  Eigen::Index zero_mode_count() const {
    Eigen::Index z = 0;
    while (z < eigenvalues.size() && eigenvalues[z] == 0.0) ++z;
    return z;
  }
};

inline Spectrum eigendecompose(const LaplacianMatrix& l) {
  const Eigen::MatrixXd& m = l.entries;
  if (m.rows() != m.cols()) throw DimensionError("Laplacian is not square");
  if (m.rows() == 0) throw InputError("empty Laplacian");
  double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12)
    throw InputError("Laplacian asymmetric by " + std::to_string(asym));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigendecomposition failed to converge");
  Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
  if (s.eigenvalues[0] < -kEigZeroTol)
    throw InputError("matrix is not positive semidefinite (lambda_min = " +
                     std::to_string(s.eigenvalues[0]) + ")");
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    if (std::abs(s.eigenvalues[i]) <= kEigZeroTol) s.eigenvalues[i] = 0.0;
  return s;
}

inline Spectrum eigendecompose(const Graph& g) {
  return eigendecompose(laplacian(g));
}

struct HeatKernel {
  double t = 0.0;
  Eigen::MatrixXd entries;  // symmetric, doubly stochastic, PSD
};

namespace detail {

// exp(-lambda t) factors below this are dropped from the spectral sum: at
// e^-40 ~ 4e-18 they are under double rounding noise for order-1 entries.
// Nld trajectories spend most grid points with only a handful of slow modes
// alive, so the pruned sum turns an O(n^3) kernel per step into O(n^2 k).
inline constexpr double kModeLogCutoff = -40.0;

// Evaluates exp(-tL) from a fixed Spectrum at many t. Caches the projector
// onto the zero modes (the t -> infinity limit) so each evaluation only
// touches the still-live decaying modes.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const Spectrum& s)
      : s_(&s), zeros_(s.zero_mode_count()) {
    limit_ = s.eigenvectors.leftCols(zeros_) *
             s.eigenvectors.leftCols(zeros_).transpose();
  }

  // Number of decaying modes that still contribute at time t. Eigenvalues
  // ascend, so live modes are a prefix of the nonzero block.
  Eigen::Index live_modes(double t) const {
    const Eigen::Index n = s_->size();
    Eigen::Index live = 0;
    while (zeros_ + live < n &&
           -t * s_->eigenvalues[zeros_ + live] > kModeLogCutoff)
      ++live;
    return live;
  }

  Eigen::MatrixXd operator()(double t) const {
    if (t < 0.0) throw InputError("heat kernel time must be nonnegative");
    const Eigen::Index live = live_modes(t);
    Eigen::MatrixXd k = limit_;
    if (live > 0) {
      // V_live diag(e^{-t lambda / 2}) gives k = M M^T: PSD by construction.
      Eigen::MatrixXd m =
          s_->eigenvectors.middleCols(zeros_, live) *
          (-0.5 * t * s_->eigenvalues.segment(zeros_, live))
              .array()
              .exp()
              .matrix()
              .asDiagonal();
      k.noalias() += m * m.transpose();
    }
    k = ((k + k.transpose()) * 0.5).eval();
    return k;
  }

 private:
  const Spectrum* s_;
  Eigen::Index zeros_;
  Eigen::MatrixXd limit_;
};

}  // namespace detail

inline HeatKernel heat_kernel(const Spectrum& s, double t) {
  return {t, detail::KernelEvaluator(s)(t)};
}

// Independent route to exp(-tL): scaling and squaring with a truncated
// Taylor series, no eigendecomposition anywhere. Truncation is tightened by
// the squaring count so the final max-norm error stays within ~tol of the
// true exponential (error at most doubles per squaring since ||exp|| <= 1).
inline HeatKernel heat_kernel_series_oracle(const LaplacianMatrix& l, double t,
                                            double tol) {
  if (t < 0.0) throw InputError("heat kernel time must be nonnegative");
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  const Eigen::Index n = l.size();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const double norm = l.entries.cwiseAbs().rowwise().sum().maxCoeff();
  if (t == 0.0 || norm == 0.0) return {t, identity};

  int squarings = 0;
  double scale = t;
  while (scale * norm > 1.0) {
    scale *= 0.5;
    ++squarings;
  }
  const double term_tol =
      tol / (8.0 * std::ldexp(1.0, squarings));  // tol / (8 * 2^s)

  const Eigen::MatrixXd b = -scale * l.entries;
  Eigen::MatrixXd sum = identity;
  Eigen::MatrixXd term = identity;
  const int max_terms = 64;  // ||b|| <= 1 so ~30 terms reach 1e-32
  int k = 1;
  for (; k <= max_terms; ++k) {
    term = (term * b / static_cast<double>(k)).eval();
    sum += term;
    if (term.cwiseAbs().maxCoeff() < term_tol) break;
  }
  if (k > max_terms)
    throw NumericError("heat kernel series did not converge in " +
                       std::to_string(max_terms) + " terms");
  for (int i = 0; i < squarings; ++i) sum = (sum * sum).eval();
  sum = ((sum + sum.transpose()) * 0.5).eval();
  return {t, std::move(sum)};
}

inline HeatKernel heat_kernel_series_oracle(const Graph& g, double t,
                                            double tol) {
  return heat_kernel_series_oracle(laplacian(g), t, tol);
}

}  // namespace netflow

#endif
