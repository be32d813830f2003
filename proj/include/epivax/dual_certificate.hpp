#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "epivax/combinatorial_alloc.hpp"
#include "epivax/instance.hpp"

namespace epivax {

struct DualValue {
  double value;
  Eigen::VectorXd u;
};

/// Lagrangian bound for a PSD multiplier Z:
///   u_i = max(c_i bh_i + (delta_i - eps) Z_ii / bh_i, c_i bl_i + (delta_i - eps) Z_ii / bl_i)
///   value = sum u - trace(A Z),
/// an upper bound on sum c_i beta_i over every stable two-point allocation.
/// Throws DomainError unless Z is symmetric PSD within 1e-9 (relative).
DualValue dual_value(const Eigen::MatrixXd& z, const EpidemicInstance& inst);

struct DualOptions {
  std::size_t iterations = 2000;
  /// Initial step; <= 0 selects sum u(Z0) / (n ||A||_F).
  double step0 = 0.0;
  /// Start from diag of the per-node thresholds instead of Z = 0.
  bool threshold_start = false;
};

struct DualCertificate {
  Eigen::MatrixXd z;  // best iterate
  Eigen::VectorXd u;
  double value = 0.0;
  std::size_t iterations = 0;
  double eps = 0.0;
  double step0 = 0.0;
  /// Best value after each iteration (nonincreasing).
  std::vector<double> history;
};

/// Projected subgradient descent on dual_value over the PSD cone with step
/// step0 / sqrt(k). Returns the best iterate seen.
DualCertificate solve_dual(const EpidemicInstance& inst, const DualOptions& opts = {});

enum class Fixing { force_hi, force_lo, undetermined };
std::string_view to_string(Fixing f);

/// c_i bh_i bl_i / (delta_i - eps): the Z_ii at which both branches of u_i tie.
Eigen::VectorXd fixing_thresholds(const EpidemicInstance& inst);

/// force_hi when Z_ii < threshold - slack, force_lo when Z_ii > threshold +
/// slack; slack = relative_slack * threshold.
std::vector<Fixing> threshold_fixings(const DualCertificate& cert, const EpidemicInstance& inst,
                                      double relative_slack = 1e-6);

/// cert.value - alloc.objective_cb.
double certificate_gap(const DiscreteAllocation& alloc, const DualCertificate& cert);

}  // namespace epivax
