#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "epivax/instance.hpp"

namespace epivax {

struct FractionalAllocation {
  Eigen::VectorXd gamma;  // 1 / beta
  Eigen::VectorXd beta;
  double total_cost = 0.0;
  /// lambda_min((D - eps I) Gamma - A), recomputed from beta.
  double margin = 0.0;
  std::size_t cuts = 0;
  /// Relaxed objective after each LP solve; nondecreasing lower bounds on the
  /// optimum (in the solver's objective: cost, or trace for solve_trace_sdp).
  std::vector<double> lower_bounds;
};

struct CuttingPlaneOptions {
  double tol = 1e-6;
  std::size_t max_cuts = 500;
};

/// Raised when the cut budget runs out; carries the best feasible point found.
class CutBudgetExhausted : public std::runtime_error {
 public:
  CutBudgetExhausted(FractionalAllocation incumbent, double gap);
  const FractionalAllocation& incumbent() const noexcept { return incumbent_; }
  double gap() const noexcept { return gap_; }

 private:
  FractionalAllocation incumbent_;
  double gap_;
};

/// Minimum-cost rates beta_i in [beta_lo_i, beta_hi_i] with
/// lambda_1(B A - D) <= -eps, by eigenvector cutting planes in gamma = 1/beta.
/// Requires reciprocal costs (linear in gamma). Stops when the relaxed point's
/// margin is >= -tol, or when a feasible point within tol (1 + |cost|) of the
/// relaxed bound is known.
FractionalAllocation solve_fractional(const EpidemicInstance& inst,
                                      const CuttingPlaneOptions& opts = {});

/// Same solver with objective trace(Gamma). Requires homogeneous delta and
/// identical reciprocal costs; total_cost = a trace(Gamma) - b.
FractionalAllocation solve_trace_sdp(const EpidemicInstance& inst,
                                     const CuttingPlaneOptions& opts = {});

struct VerificationReport {
  double margin;
  double cost;
  bool feasible;  // margin >= -kVerificationSlack
};

/// Recomputes margin and cost from scratch. Throws DomainError when beta
/// leaves its bounds.
VerificationReport verify_allocation(const EpidemicInstance& inst, const Eigen::VectorXd& beta);

}  // namespace epivax
