#include "epivax/sis_dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "epivax/error.hpp"

namespace epivax {

double default_time_step(const Graph& g, const RateMatrices& r) {
  const auto d = g.degrees();
  double fastest = r.delta.maxCoeff();
  for (Eigen::Index i = 0; i < r.size(); ++i) fastest = std::max(fastest, r.beta(i) * d[i]);
  return 0.01 / fastest;
}

namespace {

void check_inputs(const Graph& g, const RateMatrices& r, const Eigen::VectorXd& p0,
                  double t_end, double dt) {
  if (static_cast<std::size_t>(r.size()) != g.num_nodes() || p0.size() != r.size())
    throw DomainError("rates, initial state and graph sizes differ");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(t_end >= dt)) throw DomainError("t_end must be at least dt");
  for (Eigen::Index i = 0; i < p0.size(); ++i)
    if (!(p0(i) >= 0.0 && p0(i) <= 1.0))
      throw DomainError("p0[" + std::to_string(i) + "] is outside [0, 1]");
}

template <class Rhs, class Post>
Trajectory integrate_rk4(const Eigen::VectorXd& p0, double t_end, double dt, Rhs&& rhs,
                         Post&& post) {
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / static_cast<double>(steps);
  const Eigen::Index n = p0.size();

  Trajectory traj;
  traj.times.resize(steps + 1);
  traj.states.resize(static_cast<Eigen::Index>(steps + 1), n);
  traj.times[0] = 0.0;
  traj.states.row(0) = p0.transpose();

  Eigen::VectorXd p = p0, k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t s = 1; s <= steps; ++s) {
    rhs(p, k1);
    tmp = p + 0.5 * h * k1;
    rhs(tmp, k2);
    tmp = p + 0.5 * h * k2;
    rhs(tmp, k3);
    tmp = p + h * k3;
    rhs(tmp, k4);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    post(p);
    traj.times[s] = h * static_cast<double>(s);
    traj.states.row(static_cast<Eigen::Index>(s)) = p.transpose();
  }
  return traj;
}

}  // namespace

Trajectory simulate_meanfield(const Graph& g, const RateMatrices& r, const Eigen::VectorXd& p0,
                              double t_end, double dt) {
  check_inputs(g, r, p0, t_end, dt);
  Eigen::VectorXd pressure(p0.size());
  auto rhs = [&](const Eigen::VectorXd& p, Eigen::VectorXd& out) {
    g.multiply(p, pressure);
    out = (1.0 - p.array()).matrix().cwiseProduct(r.beta.cwiseProduct(pressure)) -
          r.delta.cwiseProduct(p);
  };
  auto clamp = [](Eigen::VectorXd& p) { p = p.cwiseMax(0.0).cwiseMin(1.0); };
  return integrate_rk4(p0, t_end, dt, rhs, clamp);
}

Trajectory simulate_linear_bound(const Graph& g, const RateMatrices& r,
                                 const Eigen::VectorXd& p0, double t_end, double dt) {
  check_inputs(g, r, p0, t_end, dt);
  Eigen::VectorXd pressure(p0.size());
  auto rhs = [&](const Eigen::VectorXd& p, Eigen::VectorXd& out) {
    g.multiply(p, pressure);
    out = r.beta.cwiseProduct(pressure) - r.delta.cwiseProduct(p);
  };
  return integrate_rk4(p0, t_end, dt, rhs, [](Eigen::VectorXd&) {});
}

double estimate_decay_rate(const Trajectory& traj, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw DomainError("window_fraction must lie in (0, 1]");
  const std::size_t n = traj.size();
  if (n < 2) throw DomainError("need at least two samples to fit a decay rate");
  std::size_t first = static_cast<std::size_t>(std::floor((1.0 - window_fraction) * double(n - 1)));
  first = std::min(first, n - 2);

  double st = 0, sy = 0, stt = 0, sty = 0;
  const double count = static_cast<double>(n - first);
  for (std::size_t k = first; k < n; ++k) {
    const double norm = traj.states.row(static_cast<Eigen::Index>(k)).cwiseAbs().maxCoeff();
    if (!(norm > 0.0)) return std::numeric_limits<double>::infinity();
    const double t = traj.times[k];
    const double y = -std::log(norm);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  return (count * sty - st * sy) / (count * stt - st * st);
}

MarkovEstimate simulate_exact_markov(const Graph& g, const RateMatrices& r,
                                     const std::vector<int>& x0, double t_end,
                                     std::size_t trials, std::uint64_t seed,
                                     std::size_t samples) {
  const std::size_t n = g.num_nodes();
  if (n > kMaxMarkovNodes)
    throw DomainError("exact Markov simulation is limited to " + std::to_string(kMaxMarkovNodes) +
                      " nodes");
  if (static_cast<std::size_t>(r.size()) != n || x0.size() != n)
    throw DomainError("rates, initial state and graph sizes differ");
  if (trials < 1) throw DomainError("need at least one trial");
  if (samples < 2) throw DomainError("need at least two sample times");
  if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
  for (std::size_t i = 0; i < n; ++i)
    if (x0[i] != 0 && x0[i] != 1) throw DomainError("x0 must be binary");

  MarkovEstimate est;
  est.trials = trials;
  est.times.resize(samples);
  for (std::size_t k = 0; k < samples; ++k)
    est.times[k] = t_end * static_cast<double>(k) / static_cast<double>(samples - 1);

  // Integer counts: the reduction is exact and independent of trial order.
  std::vector<std::uint64_t> counts(samples * n, 0);
  std::vector<char> state(n);
  std::vector<int> infected_nbrs(n);
  std::vector<double> rate(n);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(seed + trial);
    auto uniform01 = [&rng] {
      return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;  // open interval (0, 1)
    };
    for (std::size_t i = 0; i < n; ++i) state[i] = static_cast<char>(x0[i]);
    for (std::size_t i = 0; i < n; ++i) {
      infected_nbrs[i] = 0;
      for (int j : g.neighbors(static_cast<int>(i))) infected_nbrs[i] += state[j];
    }

    double t = 0.0;
    std::size_t next_sample = 0;
    while (next_sample < samples) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        rate[i] = state[i] ? r.delta(Eigen::Index(i)) : r.beta(Eigen::Index(i)) * infected_nbrs[i];
        total += rate[i];
      }
      const double wait = total > 0.0 ? -std::log(uniform01()) / total
                                      : std::numeric_limits<double>::infinity();
      while (next_sample < samples && est.times[next_sample] < t + wait) {
        for (std::size_t i = 0; i < n; ++i) counts[next_sample * n + i] += state[i];
        ++next_sample;
      }
      if (next_sample == samples) break;
      t += wait;

      double target = uniform01() * total;
      std::size_t pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (target < rate[i]) {
          pick = i;
          break;
        }
        target -= rate[i];
      }
      while (rate[pick] == 0.0 && pick > 0) --pick;
      const int delta_state = state[pick] ? -1 : 1;
      state[pick] = static_cast<char>(!state[pick]);
      for (int j : g.neighbors(static_cast<int>(pick))) infected_nbrs[j] += delta_state;
    }
  }

  const auto s = static_cast<Eigen::Index>(samples);
  const auto nn = static_cast<Eigen::Index>(n);
  est.mean.resize(s, nn);
  est.std_error.resize(s, nn);
  const double count = static_cast<double>(trials);
  for (Eigen::Index k = 0; k < s; ++k)
    for (Eigen::Index i = 0; i < nn; ++i) {
      const double p = static_cast<double>(counts[std::size_t(k) * n + std::size_t(i)]) / count;
      est.mean(k, i) = p;
      est.std_error(k, i) = trials > 1 ? std::sqrt(p * (1.0 - p) / (count - 1.0)) : 0.0;
    }
  return est;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  for (Eigen::Index i = 0; i < traj.num_nodes(); ++i) out += ",p_" + std::to_string(i);
  out += '\n';
  char buf[32];
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g", traj.times[k]);
    out += buf;
    for (Eigen::Index i = 0; i < traj.num_nodes(); ++i) {
      std::snprintf(buf, sizeof buf, ",%.12g", traj.states(static_cast<Eigen::Index>(k), i));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace epivax
