#include "epivax/spectral.hpp"

#include <cmath>
#include <string>

#include "epivax/error.hpp"

namespace epivax {

RateMatrices::RateMatrices(Eigen::VectorXd beta_, Eigen::VectorXd delta_)
    : beta(std::move(beta_)), delta(std::move(delta_)) {
  if (beta.size() != delta.size())
    throw DomainError("beta and delta lengths differ (" + std::to_string(beta.size()) + " vs " +
                      std::to_string(delta.size()) + ")");
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (!(beta(i) > 0.0)) throw DomainError("beta[" + std::to_string(i) + "] must be positive");
    if (!(delta(i) > 0.0)) throw DomainError("delta[" + std::to_string(i) + "] must be positive");
  }
}

RateMatrices RateMatrices::homogeneous(std::size_t n, double beta, double delta) {
  const auto k = static_cast<Eigen::Index>(n);
  return RateMatrices(Eigen::VectorXd::Constant(k, beta), Eigen::VectorXd::Constant(k, delta));
}

namespace {

void check_size(const Graph& g, const RateMatrices& r) {
  if (static_cast<std::size_t>(r.size()) != g.num_nodes())
    throw DomainError("rate vectors have length " + std::to_string(r.size()) + " but graph has " +
                      std::to_string(g.num_nodes()) + " nodes");
}

}  // namespace

Eigen::MatrixXd symmetric_spreading_matrix(const Graph& g, const RateMatrices& r) {
  check_size(g, r);
  const Eigen::VectorXd root = r.beta.cwiseSqrt();
  Eigen::MatrixXd m = root.asDiagonal() * g.adjacency() * root.asDiagonal();
  m.diagonal() -= r.delta;
  return m;
}

double lambda_max_effective(const Graph& g, const RateMatrices& r) {
  return linalg::max_eigenvalue(symmetric_spreading_matrix(g, r));
}

Eigen::MatrixXd stability_matrix(const Graph& g, const RateMatrices& r, double eps) {
  check_size(g, r);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (!(eps < r.delta(i)))
      throw DomainError("eps = " + std::to_string(eps) + " is not below delta[" +
                        std::to_string(i) + "] = " + std::to_string(r.delta(i)));
  }
  Eigen::MatrixXd m = -g.adjacency();
  m.diagonal() += (r.delta.array() - eps).matrix().cwiseQuotient(r.beta);
  return m;
}

double stability_margin(const Graph& g, const RateMatrices& r, double eps) {
  return linalg::min_eigenvalue(stability_matrix(g, r, eps));
}

bool is_stable(const Graph& g, const RateMatrices& r, double eps) {
  return stability_margin(g, r, eps) >= -kFeasibilitySlack;
}

double adjacency_spectral_radius(const Graph& g) {
  return linalg::max_eigenvalue(g.adjacency());
}

double critical_beta(const Graph& g, double delta) {
  if (g.num_edges() == 0) throw DomainError("critical rate undefined for a graph without edges");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  return delta / adjacency_spectral_radius(g);
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DomainError("psd_project needs a square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("psd_project needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd out = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

SpreadingEigenvalue::SpreadingEigenvalue(const Graph& g, Eigen::VectorXd delta)
    : graph_(&g), delta_(std::move(delta)) {
  if (static_cast<std::size_t>(delta_.size()) != g.num_nodes())
    throw DomainError("delta length does not match the graph");
}

linalg::EigenPair SpreadingEigenvalue::operator()(const Eigen::VectorXd& beta,
                                                  const Eigen::VectorXd* warm) const {
  const Eigen::Index n = delta_.size();
  if (beta.size() != n) throw DomainError("beta length does not match the graph");
  const Eigen::VectorXd root = beta.cwiseSqrt();
  Eigen::VectorXd scaled(n), product(n);
  auto op = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    scaled = root.cwiseProduct(x);
    graph_->multiply(scaled, product);
    y = root.cwiseProduct(product) - delta_.cwiseProduct(x);
  };
  // A strictly positive start overlaps the (nonnegative) Perron vector of
  // every component.
  Eigen::VectorXd start = Eigen::VectorXd::Constant(n, 1e-3 / std::sqrt(static_cast<double>(n)));
  if (warm != nullptr && warm->size() == n) start += warm->cwiseAbs();
  else start.setConstant(1.0);
  return linalg::lanczos_max(op, n, start);
}

}  // namespace epivax
