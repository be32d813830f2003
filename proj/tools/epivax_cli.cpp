#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "epivax/commands.hpp"
#include "epivax/error.hpp"
#include "epivax/graph.hpp"

using namespace epivax;

namespace {

struct Common {
  std::string graph;
  std::string params;
  std::string out;
  std::optional<double> eps;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c, bool need_params) {
  cmd->add_option("--graph", c.graph, "Edge-list file (overrides graph_path)");
  auto* p = cmd->add_option("--params", c.params, "Instance parameter file (JSON)");
  if (need_params) p->required();
  cmd->add_option("--out", c.out, "Output file or directory (default: stdout)");
  cmd->add_option("--eps", c.eps, "Decay target (overrides the parameter file)");
  cmd->add_option("--seed", c.seed, "Random seed (overrides the parameter file)");
}

InstanceSpec load_spec(const Common& c) {
  InstanceSpec spec = load_instance_spec(c.params);
  if (!c.graph.empty()) spec.graph_path = c.graph;
  if (c.eps) spec.eps = *c.eps;
  if (c.seed) spec.seed = *c.seed;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vaccine allocation for networked SIS epidemics"};
  app.require_subcommand(1);

  Common c;
  double delta = 0.1;
  std::string mode = "reverse-greedy";
  std::string allocation_path, z_out, markov_out;
  std::size_t iterations = 2000, max_cuts = 500, trials = 0, stride = 100;
  double tol = 1e-6, t_end = 200.0;
  bool threshold_start = false;

  auto* analyze = app.add_subcommand("analyze", "Graph summary: lambda_1, beta_c, degrees");
  analyze->add_option("--graph", c.graph, "Edge-list file")->required();
  analyze->add_option("--delta", delta, "Curing rate");
  analyze->add_option("--out", c.out, "Output file");

  auto* alloc = app.add_subcommand("allocate", "Solve an allocation problem");
  add_common(alloc, c, true);
  alloc->add_option("--mode", mode, "fractional|greedy|reverse-greedy|degree|centrality|exhaustive");
  alloc->add_option("--tol", tol, "Cutting-plane tolerance");
  alloc->add_option("--max-cuts", max_cuts, "Cutting-plane budget");

  auto* certify = app.add_subcommand("certify", "Dual upper bound for a combinatorial allocation");
  add_common(certify, c, true);
  certify->add_option("--allocation", allocation_path, "Allocation result file");
  certify->add_option("--iterations", iterations, "Subgradient iterations");
  certify->add_flag("--threshold-start", threshold_start, "Start from the threshold diagonal");
  certify->add_option("--z-out", z_out, "Write Z as CSV");

  auto* simulate = app.add_subcommand("simulate", "Mean-field trajectory from p0 = 0.5");
  add_common(simulate, c, true);
  simulate->add_option("--allocation", allocation_path, "Allocation result file (default: beta_hi)");
  simulate->add_option("--t-end", t_end, "Horizon");
  simulate->add_option("--stride", stride, "Keep every k-th integration step");
  simulate->add_option("--markov-trials", trials, "Also run the exact chain (n <= 20)");
  simulate->add_option("--markov-out", markov_out, "CSV for the exact-chain estimate");

  auto* report = app.add_subcommand("report", "Run the multiplier sweep and write figure CSVs");
  add_common(report, c, true);
  report->add_option("--max-cuts", max_cuts, "Cutting-plane budget");
  report->add_option("--iterations", iterations, "Subgradient iterations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (analyze->parsed()) {
      write_text(c.out, dump(cmd_analyze(load_edge_list(c.graph), delta)));
      return 0;
    }
    const InstanceSpec spec = load_spec(c);
    const Graph g = load_edge_list(spec.graph_path);

    if (alloc->parsed()) {
      const auto inst = build_instance(spec, g);
      write_text(c.out, dump(cmd_allocate(inst, mode, {tol, max_cuts})));
    } else if (certify->parsed()) {
      const auto inst = build_instance(spec, g);
      std::optional<Json> a;
      if (!allocation_path.empty()) a = read_json_file(allocation_path);
      DualCertificate cert;
      DualOptions opts;
      opts.iterations = iterations;
      opts.threshold_start = threshold_start;
      write_text(c.out, dump(cmd_certify(inst, a ? &*a : nullptr, opts, &cert)));
      if (!z_out.empty()) write_text(z_out, matrix_csv(cert.z));
    } else if (simulate->parsed()) {
      const auto inst = build_instance(spec, g);
      std::optional<Json> a;
      if (!allocation_path.empty()) a = read_json_file(allocation_path);
      SimulateOptions opts;
      opts.t_end = t_end;
      opts.stride = stride;
      opts.markov_trials = trials;
      opts.seed = spec.seed;
      const auto out = cmd_simulate(inst, a ? &*a : nullptr, opts);
      write_text(c.out, out.meanfield_csv);
      if (out.markov_csv) write_text(markov_out, *out.markov_csv);
      std::cerr << "margin " << format_double(out.margin) << " decay_rate " << format_double(out.decay_rate) << '\n';
    } else if (report->parsed()) {
      if (c.out.empty()) throw std::runtime_error("report needs --out DIR");
      auto opts = protocol_options(spec);
      opts.cuts.max_cuts = max_cuts;
      opts.dual.iterations = iterations;
      const auto files = make_report(g, run_protocol(g, opts));
      std::filesystem::create_directories(c.out);
      for (const auto& [name, text] : files) write_text((std::filesystem::path(c.out) / name).string(), text);
    }
    return 0;
  } catch (const InfeasibleInstance& e) {
    std::cerr << "infeasible instance: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
