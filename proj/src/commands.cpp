#include "epivax/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "epivax/error.hpp"
#include "epivax/sis_dynamics.hpp"
#include "epivax/spectral.hpp"

namespace epivax {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json cmd_analyze(const Graph& g, double delta) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const auto deg = g.degrees();
  Json j;
  j["n"] = g.num_nodes();
  j["m"] = g.num_edges();
  const double lambda1 = adjacency_spectral_radius(g);
  j["lambda1"] = lambda1;
  j["delta"] = delta;
  j["beta_c"] = g.num_edges() ? Json(critical_beta(g, delta)) : Json(nullptr);
  Json d;
  if (!deg.empty()) {
    d["min"] = *std::min_element(deg.begin(), deg.end());
    d["max"] = *std::max_element(deg.begin(), deg.end());
    d["mean"] = std::accumulate(deg.begin(), deg.end(), 0.0) / double(deg.size());
  }
  j["degree"] = d;
  return j;
}

Json cmd_allocate(const EpidemicInstance& inst, std::string_view mode, const CuttingPlaneOptions& cuts) {
  Json j;
  j["mode"] = std::string(mode);
  Eigen::VectorXd beta;
  if (mode == "fractional") {
    FractionalAllocation a;
    bool converged = true;
    double gap = 0.0;
    try {
      a = solve_fractional(inst, cuts);
    } catch (const CutBudgetExhausted& e) {
      a = e.incumbent();
      converged = false;
      gap = e.gap();
    }
    j.update(to_json(a));
    j["converged"] = converged;
    j["gap"] = gap;
    beta = a.beta;
  } else {
    const auto a = allocate(inst, parse_method(mode));
    j.update(to_json(a));
    beta = a.beta;
  }
  j["eps"] = inst.eps();
  j["verification"] = verification_json(inst, beta);
  return j;
}

Json cmd_certify(const EpidemicInstance& inst, const Json* allocation, const DualOptions& opts, DualCertificate* out) {
  std::optional<double> gap;
  Eigen::VectorXd beta;
  if (allocation) {
    beta = read_vector(*allocation, "beta", inst.size());
    for (Eigen::Index i = 0; i < inst.size(); ++i)
      if (beta(i) < inst.beta_lo()(i) || beta(i) > inst.beta_hi()(i))
        throw SchemaError("beta[" + std::to_string(i) + "]", "outside [beta_lo, beta_hi]");
  }
  auto cert = solve_dual(inst, opts);
  if (allocation) gap = cert.value - inst.weights().dot(beta);
  Json j = to_json(cert, threshold_fixings(cert, inst), gap);
  if (allocation) {
    j["allocation_objective_cb"] = inst.weights().dot(beta);
    j["allocation_margin"] = inst.margin(beta);
  }
  if (out) *out = std::move(cert);
  return j;
}

SimulationOutput cmd_simulate(const EpidemicInstance& inst, const Json* allocation, const SimulateOptions& opts) {
  const Eigen::VectorXd beta = allocation ? read_vector(*allocation, "beta", inst.size()) : inst.beta_hi();
  const RateMatrices rates(beta, inst.delta());
  const double dt = opts.dt > 0.0 ? opts.dt : default_time_step(inst.graph(), rates);
  const auto traj = simulate_meanfield(inst.graph(), rates, Eigen::VectorXd::Constant(inst.size(), 0.5),
                                       opts.t_end, dt);
  Trajectory thin;
  const std::size_t stride = std::max<std::size_t>(1, opts.stride);
  std::vector<Eigen::Index> rows;
  for (std::size_t k = 0; k < traj.size(); k += stride) rows.push_back(Eigen::Index(k));
  if (rows.back() != Eigen::Index(traj.size() - 1)) rows.push_back(Eigen::Index(traj.size() - 1));
  thin.states.resize(Eigen::Index(rows.size()), traj.num_nodes());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    thin.times.push_back(traj.times[std::size_t(rows[r])]);
    thin.states.row(Eigen::Index(r)) = traj.states.row(rows[r]);
  }

  SimulationOutput out{trajectory_csv(thin), estimate_decay_rate(traj), inst.margin(beta), std::nullopt};
  if (opts.markov_trials > 0) {
    const std::vector<int> x0(std::size_t(inst.size()), 1);
    const auto mc = simulate_exact_markov(inst.graph(), rates, x0, opts.t_end, opts.markov_trials, opts.seed);
    std::string csv = "t";
    for (Eigen::Index i = 0; i < inst.size(); ++i)
      csv += ",mean_" + std::to_string(i) + ",se_" + std::to_string(i);
    csv += '\n';
    for (std::size_t k = 0; k < mc.times.size(); ++k) {
      csv += format_double(mc.times[k]);
      for (Eigen::Index i = 0; i < inst.size(); ++i)
        csv += ',' + format_double(mc.mean(Eigen::Index(k), i)) + ',' + format_double(mc.std_error(Eigen::Index(k), i));
      csv += '\n';
    }
    out.markov_csv = std::move(csv);
  }
  return out;
}

ProtocolOptions protocol_options(const InstanceSpec& spec) {
  ProtocolOptions o;
  o.delta = spec.delta;
  o.vaccine_effect = spec.vaccine_effect;
  o.eps = spec.eps;
  o.weights = spec.cost_weights;
  return o;
}

namespace {

Eigen::VectorXd broadcast(const std::vector<double>& v, Eigen::Index n, const char* name) {
  if (v.size() == 1) return Eigen::VectorXd::Constant(n, v.front());
  if (Eigen::Index(v.size()) != n) throw DomainError(std::string(name) + " length does not match the graph");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), n);
}

}  // namespace

std::vector<ProtocolCase> run_protocol(const Graph& g, const ProtocolOptions& opts) {
  const auto n = Eigen::Index(g.num_nodes());
  const double lambda1 = adjacency_spectral_radius(g);
  if (!(lambda1 > 0.0)) throw DomainError("protocol needs a graph with edges");
  const Eigen::VectorXd delta = broadcast(opts.delta, n, "delta");
  const Eigen::VectorXd weights = broadcast(opts.weights, n, "weights");

  std::vector<ProtocolCase> cases;
  for (double m : opts.multipliers) {
    const Eigen::VectorXd hi = m * delta / lambda1;
    EpidemicInstance inst(g, delta, opts.vaccine_effect * hi, hi, opts.eps, CostForm::reciprocal, weights);
    ProtocolCase c{m, inst, {}, solve_dual(inst, opts.dual), std::nullopt, true, 0.0};
    for (Method method : opts.methods) c.allocations.push_back(allocate(inst, method));
    if (opts.fractional) {
      try {
        c.fractional = solve_fractional(inst, opts.cuts);
      } catch (const CutBudgetExhausted& e) {
        c.fractional = e.incumbent();
        c.fractional_converged = false;
        c.fractional_gap = e.gap();
      }
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

std::string cost_curve_csv(const CostFunction& f, std::size_t points) {
  if (points < 2) throw DomainError("cost curve needs at least two points");
  std::string out = "beta,cost\n";
  for (std::size_t k = 0; k < points; ++k) {
    // Endpoints are emitted exactly.
    const double beta = k == 0 ? f.beta_lo
                        : k + 1 == points
                            ? f.beta_hi
                            : f.beta_lo + (f.beta_hi - f.beta_lo) * double(k) / double(points - 1);
    out += format_double(beta) + ',' + format_double(cost_eval(f, beta)) + '\n';
  }
  return out;
}

std::vector<std::pair<int, double>> degree_fractions(const Graph& g, const std::vector<int>& vaccinated) {
  std::map<int, std::pair<int, int>> tally;  // degree -> (vaccinated, total)
  std::vector<char> in(g.num_nodes(), 0);
  for (int i : vaccinated) in[std::size_t(i)] = 1;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    auto& t = tally[g.degree(int(i))];
    t.first += in[i];
    ++t.second;
  }
  std::vector<std::pair<int, double>> out;
  for (const auto& [d, t] : tally) out.emplace_back(d, double(t.first) / double(t.second));
  return out;
}

std::vector<double> centrality_cumulative(const Graph& g, const std::vector<int>& vaccinated) {
  std::vector<char> in(g.num_nodes(), 0);
  for (int i : vaccinated) in[std::size_t(i)] = 1;
  const auto order = rank_nodes(g, Ranking::eigenvector_centrality);
  std::vector<double> out;
  int seen = 0;
  for (int i : order) {
    seen += in[std::size_t(i)];
    out.push_back(vaccinated.empty() ? 0.0 : double(seen) / double(vaccinated.size()));
  }
  return out;
}

std::map<std::string, std::string> make_report(const Graph& g, const std::vector<ProtocolCase>& cases) {
  std::map<std::string, std::string> files;
  files["fig1_cost_curve.csv"] = cost_curve_csv(CostFunction(1.75e-3, 8.66e-3, 1.0, CostForm::reciprocal));

  std::string summary = "method,multiplier,objective_cb,margin,dual_bound\n";
  Json report;
  report["n"] = g.num_nodes();
  report["m"] = g.num_edges();
  report["lambda1"] = adjacency_spectral_radius(g);
  report["cases"] = Json::array();
  const auto deg = g.degrees();

  for (const auto& c : cases) {
    const std::string tag = "_m" + format_double(c.multiplier) + ".csv";
    std::string fig3 = "degree,fraction_vaccinated,method\n";
    std::string fig4 = "centrality_rank,cumulative_fraction,method\n";
    Json jc;
    jc["multiplier"] = c.multiplier;
    jc["eps"] = c.instance.eps();
    jc["dual_bound"] = c.certificate.value;
    jc["dual_iterations"] = c.certificate.iterations;
    jc["allocations"] = Json::array();
    for (const auto& a : c.allocations) {
      const std::string name(to_string(a.method));
      summary += name + ',' + format_double(c.multiplier) + ',' + format_double(a.objective_cb) + ',' +
                 format_double(a.margin) + ',' + format_double(c.certificate.value) + '\n';
      for (const auto& [d, f] : degree_fractions(g, a.vaccinated))
        fig3 += std::to_string(d) + ',' + format_double(f) + ',' + name + '\n';
      const auto cum = centrality_cumulative(g, a.vaccinated);
      for (std::size_t r = 0; r < cum.size(); ++r)
        fig4 += std::to_string(r + 1) + ',' + format_double(cum[r]) + ',' + name + '\n';
      jc["allocations"].push_back({{"method", name},
                                   {"objective_cb", a.objective_cb},
                                   {"margin", a.margin},
                                   {"feasible", a.feasible},
                                   {"vaccinated", a.vaccinated.size()}});
    }
    files["fig3_degree_fraction" + tag] = fig3;
    files["fig4_centrality" + tag] = fig4;
    if (c.fractional) {
      std::string fig2 = "cost,degree\n";
      for (Eigen::Index i = 0; i < c.instance.size(); ++i)
        fig2 += format_double(c.instance.node_cost(i, c.fractional->beta(i))) + ',' +
                std::to_string(deg[std::size_t(i)]) + '\n';
      files["fig2_cost_degree" + tag] = fig2;
      jc["fractional"] = {{"total_cost", c.fractional->total_cost},
                          {"margin", c.fractional->margin},
                          {"cuts", c.fractional->cuts},
                          {"converged", c.fractional_converged},
                          {"gap", c.fractional_gap}};
    }
    report["cases"].push_back(jc);
  }
  files["summary.csv"] = summary;
  files["report.json"] = dump(report);
  return files;
}

}  // namespace epivax
