#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace epivax {

enum class CostForm { reciprocal, affine };

std::string_view to_string(CostForm form);
CostForm parse_cost_form(std::string_view text);

/// Vaccination cost f(beta) on [beta_lo, beta_hi]: zero at beta_hi, t_max at
/// beta_lo, decreasing in between.
///   reciprocal: t_max (1/beta - 1/beta_hi) / (1/beta_lo - 1/beta_hi)
///   affine:     t_max (beta - beta_hi) / (beta_lo - beta_hi)
struct CostFunction {
  double beta_lo;
  double beta_hi;
  double t_max;
  CostForm form;

  /// Throws DomainError unless 0 < beta_lo < beta_hi and t_max >= 0.
  CostFunction(double beta_lo, double beta_hi, double t_max, CostForm form);

  double operator()(double beta) const;
  /// df/dbeta.
  double derivative(double beta) const;
};

/// Throws DomainError when beta lies outside [beta_lo, beta_hi].
double cost_eval(const CostFunction& f, double beta);

struct Assumption1Report {
  bool pass = false;
  /// Largest normalized residual -(f'' + 2 f'/beta) / max(|f''|, |2 f'/beta|);
  /// positive values are violations.
  double worst_violation = 0.0;
  double worst_beta = 0.0;
};

inline constexpr double kAssumption1Tolerance = 1e-6;

/// Checks f''(beta) >= -(2/beta) f'(beta) with central differences of step
/// (beta_hi - beta_lo)/1e4 on `grid_points` uniform points of
/// [beta_lo + h, beta_hi - h].
Assumption1Report check_assumption1(const CostFunction& f, std::size_t grid_points = 64);

/// Sum of f_i(beta_i).
double total_cost(const std::vector<CostFunction>& fs, const Eigen::VectorXd& beta);

/// For reciprocal costs with common (beta_lo, beta_hi, t_max) the total cost
/// is a * trace(Gamma) - b, gamma_i = 1/beta_i.
struct TraceTransform {
  double a;
  double b;
};

/// Throws DomainError unless all costs are reciprocal with identical
/// parameters.
TraceTransform trace_transform(const std::vector<CostFunction>& fs);

}  // namespace epivax
