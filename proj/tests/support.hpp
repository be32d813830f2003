#pragma once

// Random instance generators shared by the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "epivax/graph.hpp"

namespace epivax::testing {

inline Graph erdos_renyi(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  return Graph(n, std::move(edges));
}

inline Eigen::VectorXd uniform_vector(Eigen::Index n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(int(i), int(i + 1));
  return Graph(n, edges);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) edges.emplace_back(int(u), int(v));
  return Graph(n, edges);
}

/// Center 0 joined to `leaves` leaves.
inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.emplace_back(0, int(i));
  return Graph(leaves + 1, edges);
}

}  // namespace epivax::testing
