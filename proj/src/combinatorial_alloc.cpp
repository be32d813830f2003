#include "epivax/combinatorial_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "epivax/error.hpp"

namespace epivax {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::greedy_forward: return "greedy";
    case Method::greedy_reverse: return "reverse-greedy";
    case Method::degree: return "degree";
    case Method::centrality: return "centrality";
    case Method::exhaustive: return "exhaustive";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  for (Method m : {Method::greedy_forward, Method::greedy_reverse, Method::degree,
                   Method::centrality, Method::exhaustive})
    if (text == to_string(m)) return m;
  throw DomainError("unknown allocation method '" + std::string(text) + "'");
}

DiscreteAllocation make_allocation(const EpidemicInstance& inst, Method method,
                                   std::vector<int> vaccinated, std::vector<int> order) {
  std::sort(vaccinated.begin(), vaccinated.end());
  DiscreteAllocation out;
  out.method = method;
  out.beta = inst.beta_hi();
  for (int i : vaccinated) {
    if (i < 0 || i >= inst.size()) throw DomainError("vaccinated node " + std::to_string(i) + " out of range");
    out.beta(i) = inst.beta_lo()(i);
    out.total_cost += inst.weights()(i);
  }
  if (std::adjacent_find(vaccinated.begin(), vaccinated.end()) != vaccinated.end())
    throw DomainError("vaccinated set lists a node twice");
  out.vaccinated = std::move(vaccinated);
  out.order = std::move(order);
  out.objective_cb = inst.weights().dot(out.beta);
  out.margin = inst.margin(out.beta);
  out.feasible = out.margin >= -kVerificationSlack;
  return out;
}

namespace {

void require_positive_weight(const EpidemicInstance& inst, int i) {
  if (!(inst.weights()(i) > 0.0))
    throw DomainError("benefit per unit cost needs c[" + std::to_string(i) + "] > 0");
}

// Benefits within this distance of the best count as ties.
double tie_tolerance(const EpidemicInstance& inst) {
  return 1e-11 * inst.delta().maxCoeff() / inst.weights().minCoeff();
}

std::vector<int> members(const std::vector<char>& in_set) {
  std::vector<int> out;
  for (std::size_t i = 0; i < in_set.size(); ++i)
    if (in_set[i]) out.push_back(int(i));
  return out;
}

}  // namespace

double marginal_benefit(const EpidemicInstance& inst, int i, const std::vector<char>& in_set) {
  if (in_set.size() != std::size_t(inst.size())) throw DomainError("set mask has the wrong length");
  if (i < 0 || i >= inst.size()) throw DomainError("node out of range");
  if (in_set[std::size_t(i)]) throw DomainError("node " + std::to_string(i) + " is already in the set");
  require_positive_weight(inst, i);
  Eigen::VectorXd beta = inst.beta_hi();
  for (Eigen::Index j = 0; j < inst.size(); ++j)
    if (in_set[std::size_t(j)]) beta(j) = inst.beta_lo()(j);
  const SpreadingEigenvalue eval(inst.graph(), inst.delta());
  const double before = eval(beta).value;
  beta(i) = inst.beta_lo()(i);
  return (before - eval(beta).value) / inst.weights()(i);
}

DiscreteAllocation greedy_forward(const EpidemicInstance& inst) {
  const Eigen::Index n = inst.size();
  for (Eigen::Index i = 0; i < n; ++i) require_positive_weight(inst, int(i));
  const SpreadingEigenvalue eval(inst.graph(), inst.delta());
  const double tie = tie_tolerance(inst);

  std::vector<char> in_set(static_cast<std::size_t>(n), 0);
  std::vector<int> order;
  Eigen::VectorXd beta = inst.beta_hi();
  std::vector<double> benefit(static_cast<std::size_t>(n));
  while (!inst.feasible(beta)) {
    const auto current = eval(beta);
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_set[std::size_t(i)]) continue;
      const double saved = beta(i);
      beta(i) = inst.beta_lo()(i);
      benefit[std::size_t(i)] = (current.value - eval(beta, &current.vector).value) / inst.weights()(i);
      beta(i) = saved;
      best = std::max(best, benefit[std::size_t(i)]);
    }
    int pick = -1;
    for (Eigen::Index i = 0; i < n && pick < 0; ++i)
      if (!in_set[std::size_t(i)] && benefit[std::size_t(i)] >= best - tie) pick = int(i);
    if (pick < 0) break;  // everyone vaccinated; saturation makes this unreachable
    in_set[std::size_t(pick)] = 1;
    beta(pick) = inst.beta_lo()(pick);
    order.push_back(pick);
  }
  return make_allocation(inst, Method::greedy_forward, members(in_set), std::move(order));
}

DiscreteAllocation greedy_reverse(const EpidemicInstance& inst) {
  const Eigen::Index n = inst.size();
  for (Eigen::Index i = 0; i < n; ++i) require_positive_weight(inst, int(i));
  const SpreadingEigenvalue eval(inst.graph(), inst.delta());
  const double tie = tie_tolerance(inst);

  std::vector<char> in_set(static_cast<std::size_t>(n), 1);
  std::vector<int> removed;
  Eigen::VectorXd beta = inst.beta_lo();
  std::vector<double> benefit(static_cast<std::size_t>(n));
  for (Eigen::Index remaining = n; remaining > 0; --remaining) {
    const auto current = eval(beta);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!in_set[std::size_t(j)]) continue;
      const double saved = beta(j);
      beta(j) = inst.beta_hi()(j);
      benefit[std::size_t(j)] = (eval(beta, &current.vector).value - current.value) / inst.weights()(j);
      beta(j) = saved;
      best = std::min(best, benefit[std::size_t(j)]);
    }
    int pick = -1;
    for (Eigen::Index j = 0; j < n && pick < 0; ++j)
      if (in_set[std::size_t(j)] && benefit[std::size_t(j)] <= best + tie) pick = int(j);

    beta(pick) = inst.beta_hi()(pick);
    if (!inst.feasible(beta)) {
      beta(pick) = inst.beta_lo()(pick);
      break;
    }
    in_set[std::size_t(pick)] = 0;
    removed.push_back(pick);
  }
  return make_allocation(inst, Method::greedy_reverse, members(in_set), std::move(removed));
}

std::vector<int> rank_nodes(const Graph& g, Ranking ranking) {
  const auto n = g.num_nodes();
  std::vector<long long> key(n);
  if (ranking == Ranking::degree) {
    for (std::size_t i = 0; i < n; ++i) key[i] = g.degree(int(i));
  } else {
    // Quantized so that symmetric nodes tie exactly and fall back to index order.
    const Eigen::VectorXd c = eigenvector_centrality(g);
    for (std::size_t i = 0; i < n; ++i) key[i] = std::llround(c(Eigen::Index(i)) * 1e10);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[std::size_t(a)] > key[std::size_t(b)]; });
  return order;
}

DiscreteAllocation threshold_baseline(const EpidemicInstance& inst, Ranking ranking) {
  const Method method = ranking == Ranking::degree ? Method::degree : Method::centrality;
  Eigen::VectorXd beta = inst.beta_hi();
  if (inst.feasible(beta)) return make_allocation(inst, method, {}, {});
  const auto order = rank_nodes(inst.graph(), ranking);
  std::vector<int> prefix;
  for (int i : order) {
    beta(i) = inst.beta_lo()(i);
    prefix.push_back(i);
    if (inst.feasible(beta)) break;
  }
  return make_allocation(inst, method, prefix, prefix);
}

DiscreteAllocation exhaustive_optimum(const EpidemicInstance& inst) {
  const Eigen::Index n = inst.size();
  if (n > kMaxExhaustiveNodes)
    throw DomainError("exhaustive search is limited to " + std::to_string(kMaxExhaustiveNodes) + " nodes");
  const Eigen::VectorXd& c = inst.weights();
  const Eigen::VectorXd drop = c.cwiseProduct(inst.beta_hi() - inst.beta_lo());
  const double top = c.dot(inst.beta_hi());

  double best = -std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = (1u << n) - 1;
  Eigen::VectorXd beta(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double value = top;
    for (Eigen::Index i = 0; i < n; ++i)
      if (mask >> i & 1u) value -= drop(i);
    if (!(value > best)) continue;
    for (Eigen::Index i = 0; i < n; ++i) beta(i) = (mask >> i & 1u) ? inst.beta_lo()(i) : inst.beta_hi()(i);
    if (!inst.feasible(beta)) continue;
    best = value;
    best_mask = mask;
  }
  std::vector<int> set;
  for (Eigen::Index i = 0; i < n; ++i)
    if (best_mask >> i & 1u) set.push_back(int(i));
  return make_allocation(inst, Method::exhaustive, set, set);
}

DiscreteAllocation allocate(const EpidemicInstance& inst, Method method) {
  switch (method) {
    case Method::greedy_forward: return greedy_forward(inst);
    case Method::greedy_reverse: return greedy_reverse(inst);
    case Method::degree: return threshold_baseline(inst, Ranking::degree);
    case Method::centrality: return threshold_baseline(inst, Ranking::eigenvector_centrality);
    case Method::exhaustive: return exhaustive_optimum(inst);
  }
  throw DomainError("unknown method");
}

}  // namespace epivax
