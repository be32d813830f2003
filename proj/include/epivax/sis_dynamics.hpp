#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "epivax/graph.hpp"
#include "epivax/spectral.hpp"

namespace epivax {

/// Per-node infection probabilities on a time grid; row k of `states` is
/// p(times[k]).
struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd states;

  std::size_t size() const noexcept { return times.size(); }
  Eigen::Index num_nodes() const noexcept { return states.cols(); }
};

/// 0.01 / max(max_i beta_i d_i, max_i delta_i).
double default_time_step(const Graph& g, const RateMatrices& r);

/// Mean-field SIS dynamics dp_i/dt = (1 - p_i) beta_i sum_j a_ij p_j - delta_i p_i,
/// classical RK4 with a fixed step no larger than `dt` that lands exactly on
/// `t_end`. States are clamped to [0, 1] after every step.
Trajectory simulate_meanfield(const Graph& g, const RateMatrices& r, const Eigen::VectorXd& p0,
                              double t_end, double dt);

/// Linear upper-bounding system dp/dt = (B A - D) p, same integrator,
/// no clamping.
Trajectory simulate_linear_bound(const Graph& g, const RateMatrices& r,
                                 const Eigen::VectorXd& p0, double t_end, double dt);

/// Least-squares slope of -log ||p(t)||_inf over the trailing
/// `window_fraction` of the samples. +infinity when any sample in the window
/// is zero.
double estimate_decay_rate(const Trajectory& traj, double window_fraction = 0.5);

/// Monte Carlo estimate of the exact SIS Markov chain marginals.
struct MarkovEstimate {
  std::vector<double> times;
  Eigen::MatrixXd mean;       // times x nodes
  Eigen::MatrixXd std_error;  // standard error of each mean
  std::size_t trials = 0;
};

inline constexpr std::size_t kMaxMarkovNodes = 20;

/// Continuous-time event simulation of the networked SIS chain: a susceptible
/// node i is infected at rate beta_i times its number of infected neighbors
/// and an infected node recovers at rate delta_i. Trial k draws from
/// mt19937_64(seed + k); `samples` uniform sample times cover [0, t_end].
/// Refuses graphs with more than kMaxMarkovNodes nodes.
MarkovEstimate simulate_exact_markov(const Graph& g, const RateMatrices& r,
                                     const std::vector<int>& x0, double t_end,
                                     std::size_t trials, std::uint64_t seed,
                                     std::size_t samples = 64);

/// CSV with header "t,p_0,...,p_{n-1}".
std::string trajectory_csv(const Trajectory& traj);

}  // namespace epivax
