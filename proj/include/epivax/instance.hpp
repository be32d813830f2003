#pragma once

#include <vector>

#include <Eigen/Dense>

#include "epivax/cost_model.hpp"
#include "epivax/graph.hpp"
#include "epivax/spectral.hpp"

namespace epivax {

/// A vaccination problem: graph, curing rates, per-node attainable infection
/// rates [beta_lo_i, beta_hi_i], decay target eps and per-node costs. Node i's
/// cost uses `form` with scale weights(i): T_i for reciprocal costs, c_i for
/// affine ones (the discrete objective sum c_i beta_i reads the same weights).
///
/// Construction fails with InfeasibleInstance when vaccinating everyone still
/// leaves lambda_1(B_lo A - D) > -eps.
class EpidemicInstance {
 public:
  EpidemicInstance(Graph graph, Eigen::VectorXd delta, Eigen::VectorXd beta_lo,
                   Eigen::VectorXd beta_hi, double eps, CostForm form, Eigen::VectorXd weights);

  /// Homogeneous delta and bounds, unit weights.
  static EpidemicInstance homogeneous(Graph graph, double delta, double beta_lo, double beta_hi,
                                      double eps, CostForm form = CostForm::reciprocal);

  const Graph& graph() const noexcept { return graph_; }
  const Eigen::VectorXd& delta() const noexcept { return delta_; }
  const Eigen::VectorXd& beta_lo() const noexcept { return beta_lo_; }
  const Eigen::VectorXd& beta_hi() const noexcept { return beta_hi_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  double eps() const noexcept { return eps_; }
  CostForm cost_form() const noexcept { return form_; }
  Eigen::Index size() const noexcept { return delta_.size(); }

  /// Cost of setting node i to beta. Nodes with beta_lo == beta_hi cost 0.
  double node_cost(Eigen::Index i, double beta) const;
  double total_cost(const Eigen::VectorXd& beta) const;

  /// stability_margin with this instance's delta and eps.
  double margin(const Eigen::VectorXd& beta) const;
  bool feasible(const Eigen::VectorXd& beta) const;

 private:
  Graph graph_;
  Eigen::VectorXd delta_, beta_lo_, beta_hi_, weights_;
  double eps_;
  CostForm form_;
};

}  // namespace epivax
