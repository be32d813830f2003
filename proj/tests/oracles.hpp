#pragma once

// Independent reference solvers and instance generators for the allocation
// tests. Nothing here calls the allocation modules.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "epivax/error.hpp"
#include "epivax/instance.hpp"
#include "support.hpp"

namespace epivax::testing {

/// lambda_1(B A - D) from the nonsymmetric eigensolver.
inline double spectral_abscissa(const Graph& g, const Eigen::VectorXd& beta,
                                const Eigen::VectorXd& delta) {
  Eigen::MatrixXd m = beta.asDiagonal() * g.adjacency();
  m.diagonal() -= delta;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, es.eigenvalues()(i).real());
  return best;
}

/// Random instance on G(n, p) with beta_hi above the epidemic threshold and
/// beta_lo = ratio * beta_hi; redraws until full vaccination stabilizes it.
inline EpidemicInstance random_instance(std::size_t n, std::mt19937_64& rng, CostForm form,
                                        double p = 0.5, double max_eps_fraction = 0.3,
                                        double ratio = 0.2) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const Graph g = erdos_renyi(n, p, rng);
    const Eigen::VectorXd delta = uniform_vector(Eigen::Index(n), 0.1, 0.5, rng);
    const double lambda1 = g.num_edges() ? Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                               g.adjacency(), Eigen::EigenvaluesOnly)
                                               .eigenvalues()
                                               .maxCoeff()
                                         : 1.0;
    Eigen::VectorXd beta_hi(n);
    for (std::size_t i = 0; i < n; ++i)
      beta_hi(Eigen::Index(i)) = (1.0 + 2.0 * unit(rng)) * delta(Eigen::Index(i)) / lambda1;
    const Eigen::VectorXd beta_lo = ratio * beta_hi;
    const double eps = max_eps_fraction * delta.minCoeff() * unit(rng);
    const Eigen::VectorXd weights = uniform_vector(Eigen::Index(n), 0.5, 2.0, rng);
    try {
      return EpidemicInstance(g, delta, beta_lo, beta_hi, eps, form, weights);
    } catch (const InfeasibleInstance&) {
    }
  }
}

/// Homogeneous instance following the experimental protocol: delta = 0.1,
/// beta_hi = multiplier * delta / lambda_1, beta_lo = 0.2 beta_hi, unit
/// weights, eps = 0, on G(n, p) (redrawn until it has an edge).
inline EpidemicInstance protocol_instance(std::size_t n, double multiplier, std::mt19937_64& rng,
                                          double p = 0.5, CostForm form = CostForm::affine) {
  for (;;) {
    const Graph g = erdos_renyi(n, p, rng);
    if (g.num_edges() == 0) continue;
    const double lambda1 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g.adjacency(), Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .maxCoeff();
    const double hi = multiplier * 0.1 / lambda1;
    return EpidemicInstance::homogeneous(g, 0.1, 0.2 * hi, hi, 0.0, form);
  }
}

struct GridOptimum {
  double cost = std::numeric_limits<double>::infinity();
  Eigen::VectorXd gamma;
};

/// Minimum-cost gamma for n <= 4 by a uniform grid over the first n - 1
/// coordinates (gamma_i in [1/beta_hi_i, 1/beta_lo_i]) with the last
/// coordinate set to its exact smallest feasible value via the Schur
/// complement, followed by one zoomed grid around the best cell. Cost comes
/// from the instance's cost functions at beta = 1/gamma.
inline GridOptimum grid_fractional_optimum(const EpidemicInstance& inst, int points = 200) {
  const Eigen::Index n = inst.size();
  const Eigen::Index k = n - 1;
  const Eigen::VectorXd lo = inst.beta_hi().cwiseInverse();
  const Eigen::VectorXd hi = inst.beta_lo().cwiseInverse();
  const Eigen::VectorXd s = inst.delta().array() - inst.eps();
  const Eigen::MatrixXd a = inst.graph().adjacency();

  auto last_coordinate = [&](const Eigen::VectorXd& head) -> std::optional<double> {
    if (k == 0) return lo(0);
    Eigen::MatrixXd m11 = -a.topLeftCorner(k, k);
    m11.diagonal() += s.head(k).cwiseProduct(head);
    Eigen::LLT<Eigen::MatrixXd> llt(m11);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Eigen::VectorXd col = a.col(k).head(k);
    const double need = col.dot(llt.solve(col)) / s(k);
    const double value = std::max(lo(k), need);
    if (value > hi(k)) return std::nullopt;
    return value;
  };
  auto cost = [&](const Eigen::VectorXd& gamma) {
    Eigen::VectorXd beta = gamma.cwiseInverse().cwiseMax(inst.beta_lo()).cwiseMin(inst.beta_hi());
    return inst.total_cost(beta);
  };

  GridOptimum best;
  auto sweep = [&](const Eigen::VectorXd& from, const Eigen::VectorXd& to) {
    if (k == 0) {
      Eigen::VectorXd gamma(1);
      gamma(0) = *last_coordinate(gamma);
      const double c = cost(gamma);
      if (c < best.cost) best = {c, gamma};
      return;
    }
    std::vector<int> idx(std::size_t(k), 0);
    for (;;) {
      Eigen::VectorXd gamma(n);
      for (Eigen::Index i = 0; i < k; ++i)
        gamma(i) = from(i) + (to(i) - from(i)) * idx[std::size_t(i)] / double(points - 1);
      if (const auto last = last_coordinate(gamma.head(k))) {
        gamma(k) = *last;
        const double c = cost(gamma);
        if (c < best.cost) best = {c, gamma};
      }
      Eigen::Index d = 0;
      while (d < k && ++idx[std::size_t(d)] == points) idx[std::size_t(d++)] = 0;
      if (d == k) break;
    }
  };

  sweep(lo, hi);
  if (k > 0 && best.gamma.size() == n) {
    const Eigen::VectorXd cell = (hi - lo) / double(points - 1);
    const Eigen::VectorXd centre = best.gamma;
    sweep((centre - 2.0 * cell).cwiseMax(lo), (centre + 2.0 * cell).cwiseMin(hi));
  }
  return best;
}

struct DiscreteOptimum {
  double objective_cb = -std::numeric_limits<double>::infinity();
  std::vector<int> vaccinated;
};

/// Best feasible two-point allocation by enumeration, judged with the
/// nonsymmetric eigensolver: maximize sum c_i beta_i subject to
/// lambda_1(B A - D) <= -eps (+ tol).
inline DiscreteOptimum exhaustive_discrete(const EpidemicInstance& inst, double tol = 1e-10) {
  const auto n = std::size_t(inst.size());
  DiscreteOptimum best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    Eigen::VectorXd beta = inst.beta_hi();
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) beta(Eigen::Index(i)) = inst.beta_lo()(Eigen::Index(i));
    if (spectral_abscissa(inst.graph(), beta, inst.delta()) > -inst.eps() + tol) continue;
    const double value = inst.weights().dot(beta);
    if (value > best.objective_cb) {
      best.objective_cb = value;
      best.vaccinated.clear();
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) best.vaccinated.push_back(int(i));
    }
  }
  return best;
}

}  // namespace epivax::testing
