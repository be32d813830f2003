#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "epivax/instance.hpp"

namespace epivax {

enum class Method { greedy_forward, greedy_reverse, degree, centrality, exhaustive };

/// "greedy", "reverse-greedy", "degree", "centrality", "exhaustive".
std::string_view to_string(Method m);
Method parse_method(std::string_view text);

/// All-or-nothing vaccination: beta_i = beta_lo_i exactly for vaccinated
/// nodes and beta_hi_i otherwise.
struct DiscreteAllocation {
  Method method;
  std::vector<int> vaccinated;  // ascending
  std::vector<int> order;       // selection (or removal) order
  Eigen::VectorXd beta;
  double objective_cb = 0.0;  // sum_i c_i beta_i
  double total_cost = 0.0;    // sum_{i vaccinated} c_i
  double margin = 0.0;        // recomputed by full eigendecomposition
  bool feasible = false;      // margin >= -1e-6
};

/// Builds the allocation record for a vaccinated set, recomputing the margin.
DiscreteAllocation make_allocation(const EpidemicInstance& inst, Method method,
                                   std::vector<int> vaccinated, std::vector<int> order);

/// [lambda_1(B_S A - D) - lambda_1(B_{S+i} A - D)] / c_i, both eigenvalues
/// computed from scratch. `in_set[i]` marks S.
double marginal_benefit(const EpidemicInstance& inst, int i, const std::vector<char>& in_set);

/// Adds argmax benefit until stable. Ties go to the lowest index.
DiscreteAllocation greedy_forward(const EpidemicInstance& inst);

/// Starts from everyone vaccinated and un-vaccinates argmin benefit until the
/// next removal would break stability; returns the last stable set.
DiscreteAllocation greedy_reverse(const EpidemicInstance& inst);

enum class Ranking { degree, eigenvector_centrality };

/// Shortest stable prefix of the nodes sorted by decreasing degree or
/// centrality (ties by index).
DiscreteAllocation threshold_baseline(const EpidemicInstance& inst, Ranking ranking);

/// The node order used by threshold_baseline.
std::vector<int> rank_nodes(const Graph& g, Ranking ranking);

inline constexpr Eigen::Index kMaxExhaustiveNodes = 16;

/// Maximum of c^T b over all stable two-point allocations, by enumeration.
DiscreteAllocation exhaustive_optimum(const EpidemicInstance& inst);

DiscreteAllocation allocate(const EpidemicInstance& inst, Method method);

}  // namespace epivax
