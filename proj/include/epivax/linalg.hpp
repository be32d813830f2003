#pragma once

#include <functional>

#include <Eigen/Dense>

// Symmetric eigenvalue kernels shared by the graph, spectral and solver code.
namespace epivax::linalg {

/// Matrices up to this size go through a full dense eigendecomposition;
/// larger ones use shifted power iteration.
inline constexpr Eigen::Index kDenseEigenLimit = 512;

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

struct PowerIterationOptions {
  double tol = 1e-10;  // on the Rayleigh-quotient change, relative to max(1, |rho|)
  int max_iter = 10000;
};

/// Algebraically largest eigenpair of a symmetric matrix by power iteration
/// on M + sI, where the Gershgorin shift s makes the shifted spectrum
/// nonnegative. Starts from the all-ones vector.
EigenPair power_iteration(const Eigen::MatrixXd& m, const PowerIterationOptions& opts = {});

double max_eigenvalue(const Eigen::MatrixXd& m);
double min_eigenvalue(const Eigen::MatrixXd& m);
EigenPair max_eigenpair(const Eigen::MatrixXd& m);
EigenPair min_eigenpair(const Eigen::MatrixXd& m);

/// Full decomposition, eigenvalues ascending. Always dense.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> decompose(const Eigen::MatrixXd& m);

using MatVec = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Largest eigenpair of a symmetric operator by Lanczos with full
/// reorthogonalization. Stops once the Ritz residual drops below
/// `tol * max|ritz value|`, or when the Krylov space spans R^n, in which case
/// the result is exact up to rounding. Breakdowns are continued with a fresh
/// coordinate direction, so a deficient start cannot hide part of the
/// spectrum.
EigenPair lanczos_max(const MatVec& op, Eigen::Index n, const Eigen::VectorXd& start,
                      double tol = 1e-13);

}  // namespace epivax::linalg
