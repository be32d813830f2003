#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epivax/combinatorial_alloc.hpp"
#include "epivax/dual_certificate.hpp"
#include "epivax/fractional_alloc.hpp"
#include "epivax/serialization.hpp"

namespace epivax {

/// {"n", "m", "lambda1", "delta", "beta_c", "degree": {"min", "max", "mean"}}.
Json cmd_analyze(const Graph& g, double delta);

/// Modes: "fractional" or any combinatorial method name. The result carries
/// "mode", the module's fields and a "verification" stanza. A fractional run
/// that runs out of cuts reports its feasible incumbent with
/// "converged": false and the remaining "gap".
Json cmd_allocate(const EpidemicInstance& inst, std::string_view mode, const CuttingPlaneOptions& cuts = {});

/// Certificate for the allocation's "beta" (SchemaError when malformed).
/// Without an allocation the gap is null.
Json cmd_certify(const EpidemicInstance& inst, const Json* allocation, const DualOptions& opts = {},
                 DualCertificate* out = nullptr);

struct SimulateOptions {
  double t_end = 200.0;
  double dt = 0.0;  // <= 0: default_time_step
  std::size_t stride = 100;  // keep every stride-th step in the CSV
  std::size_t markov_trials = 0;
  std::uint64_t seed = 0;
};

struct SimulationOutput {
  std::string meanfield_csv;
  double decay_rate;
  double margin;
  std::optional<std::string> markov_csv;  // "t,mean_0,se_0,..." when trials > 0
};

/// Mean-field run from p0 = 0.5 at the allocation's beta (beta_hi without one).
SimulationOutput cmd_simulate(const EpidemicInstance& inst, const Json* allocation, const SimulateOptions& opts);

/// The experimental sweep: for every multiplier m, beta_hi = m delta / lambda_1,
/// beta_lo = vaccine_effect * beta_hi, reciprocal costs with the given weights.
struct ProtocolOptions {
  std::vector<double> multipliers{1.2, 1.8, 2.4};
  std::vector<double> delta{0.1};
  double vaccine_effect = 0.2;
  double eps = 0.0;
  std::vector<double> weights{1.0};
  std::vector<Method> methods{Method::greedy_forward, Method::greedy_reverse, Method::degree, Method::centrality};
  bool fractional = true;
  CuttingPlaneOptions cuts{};
  DualOptions dual{};
};

struct ProtocolCase {
  double multiplier;
  EpidemicInstance instance;
  std::vector<DiscreteAllocation> allocations;  // in options.methods order
  DualCertificate certificate;
  std::optional<FractionalAllocation> fractional;
  bool fractional_converged = true;
  double fractional_gap = 0.0;
};

std::vector<ProtocolCase> run_protocol(const Graph& g, const ProtocolOptions& opts);

ProtocolOptions protocol_options(const InstanceSpec& spec);

/// File name -> contents. fig1_cost_curve.csv ("beta,cost"),
/// fig2_cost_degree_m<m>.csv ("cost,degree"), fig3_degree_fraction_m<m>.csv
/// ("degree,fraction_vaccinated,method"), fig4_centrality_m<m>.csv
/// ("centrality_rank,cumulative_fraction,method"), summary.csv
/// ("method,multiplier,objective_cb,margin,dual_bound") and report.json.
std::map<std::string, std::string> make_report(const Graph& g, const std::vector<ProtocolCase>& cases);

/// Cost curve with the reference parameters beta in [1.75e-3, 8.66e-3], T = 1.
std::string cost_curve_csv(const CostFunction& f, std::size_t points = 101);

/// Per distinct degree (ascending) the fraction of those nodes vaccinated.
std::vector<std::pair<int, double>> degree_fractions(const Graph& g, const std::vector<int>& vaccinated);

/// Share of the vaccinated set among the r highest-centrality nodes, r = 1..n.
std::vector<double> centrality_cumulative(const Graph& g, const std::vector<int>& vaccinated);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace epivax
