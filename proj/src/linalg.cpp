#include "epivax/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace epivax::linalg {

namespace {

double gershgorin_lower(const Eigen::MatrixXd& m) {
  double lower = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double radius = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
    lower = std::min(lower, m(i, i) - radius);
  }
  return lower;
}

}  // namespace

EigenPair power_iteration(const Eigen::MatrixXd& m, const PowerIterationOptions& opts) {
  const Eigen::Index n = m.rows();
  const double shift = -gershgorin_lower(m);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  Eigen::VectorXd y(n);
  double rho = x.dot(m * x);
  for (int it = 0; it < opts.max_iter; ++it) {
    y.noalias() = m * x;
    y += shift * x;
    const double norm = y.norm();
    if (norm == 0.0) break;
    x = y / norm;
    const double next = x.dot(m * x);
    const bool done = std::abs(next - rho) <= opts.tol * std::max(1.0, std::abs(next));
    rho = next;
    if (done) break;
  }
  return {rho, x};
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> decompose(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m);
}

double max_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() > kDenseEigenLimit) return power_iteration(m).value;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() > kDenseEigenLimit) return -power_iteration(-m).value;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

EigenPair max_eigenpair(const Eigen::MatrixXd& m) {
  if (m.rows() > kDenseEigenLimit) return power_iteration(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::Index last = m.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

EigenPair min_eigenpair(const Eigen::MatrixXd& m) {
  if (m.rows() > kDenseEigenLimit) {
    EigenPair p = power_iteration(-m);
    p.value = -p.value;
    return p;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

EigenPair lanczos_max(const MatVec& op, Eigen::Index n, const Eigen::VectorXd& start,
                      double tol) {
  Eigen::MatrixXd basis(n, n);
  Eigen::VectorXd alpha(n), beta(n);
  Eigen::VectorXd w(n);

  Eigen::VectorXd q = start;
  double norm = q.norm();
  if (!(norm > 0.0)) {
    q = Eigen::VectorXd::Ones(n);
    norm = q.norm();
  }
  basis.col(0) = q / norm;

  Eigen::Index next_fresh = 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  Eigen::Index k = 0;
  for (;; ++k) {
    op(basis.col(k), w);
    alpha(k) = basis.col(k).dot(w);
    // Full reorthogonalization, applied twice for stability.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coeff = basis.leftCols(k + 1).transpose() * w;
      w.noalias() -= basis.leftCols(k + 1) * coeff;
    }
    beta(k) = w.norm();

    // The tridiagonal solve is O(k^2); past the first steps only check
    // convergence periodically.
    const double local = std::abs(alpha(k)) + (k > 0 ? beta(k - 1) : 0.0);
    const bool check = k < 24 || k % 4 == 0 || k + 1 == n || !(beta(k) > 1e-8 * local);
    if (!check) {
      basis.col(k + 1) = w / beta(k);
      continue;
    }

    Eigen::VectorXd diag = alpha.head(k + 1);
    Eigen::VectorXd sub = beta.head(k);
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double theta = tri.eigenvalues()(k);
    const double scale = std::max({std::abs(theta), std::abs(tri.eigenvalues()(0)), 1e-300});
    const double residual = beta(k) * std::abs(tri.eigenvectors()(k, k));

    if (k + 1 == n || residual <= tol * scale) {
      Eigen::VectorXd x = basis.leftCols(k + 1) * tri.eigenvectors().col(k);
      x.normalize();
      return {theta, x};
    }

    if (beta(k) > 1e-12 * scale) {
      basis.col(k + 1) = w / beta(k);
      continue;
    }
    // Invariant subspace found before convergence elsewhere: continue the
    // recurrence from a fresh coordinate direction orthogonal to the basis.
    beta(k) = 0.0;
    bool found = false;
    while (next_fresh < n && !found) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(n, next_fresh++);
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd coeff = basis.leftCols(k + 1).transpose() * e;
        e.noalias() -= basis.leftCols(k + 1) * coeff;
      }
      const double en = e.norm();
      if (en > 1e-8) {
        basis.col(k + 1) = e / en;
        found = true;
      }
    }
    if (!found) {
      Eigen::VectorXd x = basis.leftCols(k + 1) * tri.eigenvectors().col(k);
      x.normalize();
      return {theta, x};
    }
  }
}

}  // namespace epivax::linalg
