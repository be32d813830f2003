#pragma once

#include <Eigen/Dense>

#include "epivax/graph.hpp"
#include "epivax/linalg.hpp"

namespace epivax {

/// Per-node infection rates (B = diag(beta)) and curing rates (D = diag(delta)).
/// Both strictly positive, equal length.
struct RateMatrices {
  Eigen::VectorXd beta;
  Eigen::VectorXd delta;

  RateMatrices(Eigen::VectorXd beta_, Eigen::VectorXd delta_);

  static RateMatrices homogeneous(std::size_t n, double beta, double delta);
  Eigen::Index size() const noexcept { return beta.size(); }
};

/// Slack on the stability margin below which an allocation still counts as
/// spectrally stable.
inline constexpr double kFeasibilitySlack = 1e-9;

/// Looser slack used when re-verifying a finished allocation.
inline constexpr double kVerificationSlack = 1e-6;

/// B^{1/2} A B^{1/2} - D, symmetric and similar to B A - D.
Eigen::MatrixXd symmetric_spreading_matrix(const Graph& g, const RateMatrices& r);

/// lambda_1(B A - D), the decay exponent of the linearized SIS dynamics.
double lambda_max_effective(const Graph& g, const RateMatrices& r);

/// (D - eps I) B^{-1} - A. Requires eps < min delta.
Eigen::MatrixXd stability_matrix(const Graph& g, const RateMatrices& r, double eps);

/// lambda_min((D - eps I) B^{-1} - A). Nonnegative exactly when
/// lambda_1(B A - D) <= -eps. Throws DomainError naming the node when
/// eps >= delta_i for some i.
double stability_margin(const Graph& g, const RateMatrices& r, double eps);

/// stability_margin >= -kFeasibilitySlack.
bool is_stable(const Graph& g, const RateMatrices& r, double eps);

/// lambda_1(A_G).
double adjacency_spectral_radius(const Graph& g);

/// delta / lambda_1(A_G). Needs at least one edge and delta > 0.
double critical_beta(const Graph& g, double delta);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m);

/// Repeated evaluation of lambda_1(B A - D) for a fixed graph and curing
/// profile while beta changes, as in the greedy allocators. Each call is an
/// exact Lanczos solve on the sparse symmetric form; passing the eigenvector
/// of a nearby beta as `warm` only changes how fast it converges.
class SpreadingEigenvalue {
 public:
  SpreadingEigenvalue(const Graph& g, Eigen::VectorXd delta);

  linalg::EigenPair operator()(const Eigen::VectorXd& beta,
                               const Eigen::VectorXd* warm = nullptr) const;

 private:
  const Graph* graph_;
  Eigen::VectorXd delta_;
};

}  // namespace epivax
