#include "epivax/instance.hpp"

#include <cmath>
#include <string>

#include "epivax/error.hpp"

namespace epivax {

namespace {

void require_length(const Eigen::VectorXd& v, Eigen::Index n, const char* name) {
  if (v.size() != n)
    throw DomainError(std::string(name) + " has " + std::to_string(v.size()) + " entries, expected " +
                      std::to_string(n));
}

}  // namespace

EpidemicInstance::EpidemicInstance(Graph graph, Eigen::VectorXd delta, Eigen::VectorXd beta_lo,
                                   Eigen::VectorXd beta_hi, double eps, CostForm form,
                                   Eigen::VectorXd weights)
    : graph_(std::move(graph)),
      delta_(std::move(delta)),
      beta_lo_(std::move(beta_lo)),
      beta_hi_(std::move(beta_hi)),
      weights_(std::move(weights)),
      eps_(eps),
      form_(form) {
  const auto n = static_cast<Eigen::Index>(graph_.num_nodes());
  require_length(delta_, n, "delta");
  require_length(beta_lo_, n, "beta_lo");
  require_length(beta_hi_, n, "beta_hi");
  require_length(weights_, n, "weights");
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string at = "[" + std::to_string(i) + "]";
    if (!(delta_(i) > 0.0) || !std::isfinite(delta_(i))) throw DomainError("delta" + at + " must be positive");
    if (!(beta_lo_(i) > 0.0)) throw DomainError("beta_lo" + at + " must be positive");
    if (!(beta_hi_(i) >= beta_lo_(i)) || !std::isfinite(beta_hi_(i)))
      throw DomainError("beta_hi" + at + " must be at least beta_lo" + at);
    if (!(weights_(i) >= 0.0) || !std::isfinite(weights_(i)))
      throw DomainError("weights" + at + " must be nonnegative");
  }
  if (!(eps_ >= 0.0)) throw DomainError("eps must be nonnegative");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(eps_ < delta_(i)))
      throw DomainError("eps must be below delta[" + std::to_string(i) + "]");
  if (n > 0 && !feasible(beta_lo_))
    throw InfeasibleInstance("not stabilizable: full vaccination leaves margin " +
                             std::to_string(margin(beta_lo_)));
}

EpidemicInstance EpidemicInstance::homogeneous(Graph graph, double delta, double beta_lo,
                                               double beta_hi, double eps, CostForm form) {
  const auto n = static_cast<Eigen::Index>(graph.num_nodes());
  return EpidemicInstance(std::move(graph), Eigen::VectorXd::Constant(n, delta),
                          Eigen::VectorXd::Constant(n, beta_lo), Eigen::VectorXd::Constant(n, beta_hi),
                          eps, form, Eigen::VectorXd::Ones(n));
}

double EpidemicInstance::node_cost(Eigen::Index i, double beta) const {
  if (beta_lo_(i) == beta_hi_(i)) {
    if (beta != beta_lo_(i))
      throw DomainError("beta[" + std::to_string(i) + "] outside its bounds");
    return 0.0;
  }
  return cost_eval(CostFunction(beta_lo_(i), beta_hi_(i), weights_(i), form_), beta);
}

double EpidemicInstance::total_cost(const Eigen::VectorXd& beta) const {
  require_length(beta, size(), "beta");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < size(); ++i) sum += node_cost(i, beta(i));
  return sum;
}

double EpidemicInstance::margin(const Eigen::VectorXd& beta) const {
  return stability_margin(graph_, RateMatrices(beta, delta_), eps_);
}

bool EpidemicInstance::feasible(const Eigen::VectorXd& beta) const {
  return margin(beta) >= -kFeasibilitySlack;
}

}  // namespace epivax
