#include <optional>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "epivax/commands.hpp"
#include "epivax/error.hpp"
#include "epivax/sis_dynamics.hpp"

namespace py = pybind11;
using namespace epivax;

PYBIND11_MODULE(_epivax, m) {
  m.doc() = "Spectral vaccine allocation for networked SIS epidemics.";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InfeasibleInstance>(m, "InfeasibleInstance", domain.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  // Leaked on purpose: the translator may run during interpreter shutdown.
  static py::handle budget = py::exception<CutBudgetExhausted>(m, "CutBudgetExhausted", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const CutBudgetExhausted& e) {
      py::object err = budget(e.what());
      err.attr("incumbent") = py::cast(e.incumbent());
      err.attr("gap") = e.gap();
      PyErr_SetObject(budget.ptr(), err.ptr());
    }
  });

  py::class_<Graph>(m, "Graph")
      .def(py::init<std::size_t, std::vector<Edge>>(), py::arg("n"), py::arg("edges"))
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("edges", &Graph::edges)
      .def("degrees", &Graph::degrees)
      .def("adjacency", &Graph::adjacency)
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.num_nodes()) + " m=" + std::to_string(g.num_edges()) + ">";
      });

  m.def("parse_edge_list", &parse_edge_list);
  m.def("load_edge_list", &load_edge_list);
  m.def("serialize_edge_list", &serialize_edge_list);
  m.def("barabasi_albert", &barabasi_albert, py::arg("n"), py::arg("attach"), py::arg("seed"));
  m.def("eigenvector_centrality", &eigenvector_centrality, py::arg("graph"), py::arg("tol") = 1e-10);
  m.def("adjacency_spectral_radius", &adjacency_spectral_radius);
  m.def("critical_beta", &critical_beta, py::arg("graph"), py::arg("delta"));
  m.def(
      "stability_margin",
      [](const Graph& g, const Eigen::VectorXd& beta, const Eigen::VectorXd& delta, double eps) {
        return stability_margin(g, RateMatrices(beta, delta), eps);
      },
      py::arg("graph"), py::arg("beta"), py::arg("delta"), py::arg("eps") = 0.0);
  m.def(
      "simulate_meanfield",
      [](const Graph& g, const Eigen::VectorXd& beta, const Eigen::VectorXd& delta, const Eigen::VectorXd& p0,
         double t_end, double dt) {
        const RateMatrices r(beta, delta);
        const auto traj = simulate_meanfield(g, r, p0, t_end, dt > 0.0 ? dt : default_time_step(g, r));
        return py::make_tuple(traj.times, traj.states);
      },
      py::arg("graph"), py::arg("beta"), py::arg("delta"), py::arg("p0"), py::arg("t_end"), py::arg("dt") = 0.0);

  py::enum_<CostForm>(m, "CostForm").value("reciprocal", CostForm::reciprocal).value("affine", CostForm::affine);

  py::class_<EpidemicInstance>(m, "EpidemicInstance")
      .def(py::init<Graph, Eigen::VectorXd, Eigen::VectorXd, Eigen::VectorXd, double, CostForm, Eigen::VectorXd>(),
           py::arg("graph"), py::arg("delta"), py::arg("beta_lo"), py::arg("beta_hi"), py::arg("eps"),
           py::arg("form"), py::arg("weights"))
      .def_static("homogeneous", &EpidemicInstance::homogeneous, py::arg("graph"), py::arg("delta"),
                  py::arg("beta_lo"), py::arg("beta_hi"), py::arg("eps") = 0.0,
                  py::arg("form") = CostForm::reciprocal)
      .def_property_readonly("graph", &EpidemicInstance::graph)
      .def_property_readonly("delta", &EpidemicInstance::delta)
      .def_property_readonly("beta_lo", &EpidemicInstance::beta_lo)
      .def_property_readonly("beta_hi", &EpidemicInstance::beta_hi)
      .def_property_readonly("weights", &EpidemicInstance::weights)
      .def_property_readonly("eps", &EpidemicInstance::eps)
      .def_property_readonly("size", &EpidemicInstance::size)
      .def("margin", &EpidemicInstance::margin)
      .def("feasible", &EpidemicInstance::feasible)
      .def("total_cost", &EpidemicInstance::total_cost);

  py::class_<FractionalAllocation>(m, "FractionalAllocation")
      .def_readonly("gamma", &FractionalAllocation::gamma)
      .def_readonly("beta", &FractionalAllocation::beta)
      .def_readonly("total_cost", &FractionalAllocation::total_cost)
      .def_readonly("margin", &FractionalAllocation::margin)
      .def_readonly("cuts", &FractionalAllocation::cuts)
      .def_readonly("lower_bounds", &FractionalAllocation::lower_bounds);
  m.def(
      "solve_fractional",
      [](const EpidemicInstance& inst, double tol, std::size_t max_cuts) {
        return solve_fractional(inst, {tol, max_cuts});
      },
      py::arg("instance"), py::arg("tol") = 1e-6, py::arg("max_cuts") = 500);

  py::enum_<Method>(m, "Method")
      .value("greedy_forward", Method::greedy_forward)
      .value("greedy_reverse", Method::greedy_reverse)
      .value("degree", Method::degree)
      .value("centrality", Method::centrality)
      .value("exhaustive", Method::exhaustive);
  py::class_<DiscreteAllocation>(m, "DiscreteAllocation")
      .def_readonly("method", &DiscreteAllocation::method)
      .def_readonly("vaccinated", &DiscreteAllocation::vaccinated)
      .def_readonly("order", &DiscreteAllocation::order)
      .def_readonly("beta", &DiscreteAllocation::beta)
      .def_readonly("objective_cb", &DiscreteAllocation::objective_cb)
      .def_readonly("total_cost", &DiscreteAllocation::total_cost)
      .def_readonly("margin", &DiscreteAllocation::margin)
      .def_readonly("feasible", &DiscreteAllocation::feasible);
  m.def("allocate", &allocate, py::arg("instance"), py::arg("method"));

  py::class_<DualCertificate>(m, "DualCertificate")
      .def_readonly("z", &DualCertificate::z)
      .def_readonly("u", &DualCertificate::u)
      .def_readonly("value", &DualCertificate::value)
      .def_readonly("iterations", &DualCertificate::iterations)
      .def_readonly("eps", &DualCertificate::eps)
      .def_readonly("history", &DualCertificate::history);
  m.def(
      "solve_dual",
      [](const EpidemicInstance& inst, std::size_t iterations, double step0, bool threshold_start) {
        return solve_dual(inst, {iterations, step0, threshold_start});
      },
      py::arg("instance"), py::arg("iterations") = 2000, py::arg("step0") = 0.0, py::arg("threshold_start") = false);
  m.def(
      "dual_value",
      [](const Eigen::MatrixXd& z, const EpidemicInstance& inst) {
        auto dv = dual_value(z, inst);
        return py::make_tuple(dv.value, dv.u);
      },
      py::arg("z"), py::arg("instance"));
  m.def(
      "threshold_fixings",
      [](const DualCertificate& cert, const EpidemicInstance& inst, double slack) {
        std::vector<std::string> out;
        for (Fixing f : threshold_fixings(cert, inst, slack)) out.emplace_back(to_string(f));
        return out;
      },
      py::arg("certificate"), py::arg("instance"), py::arg("relative_slack") = 1e-6);

  m.def("_analyze", [](const Graph& g, double delta) { return dump(cmd_analyze(g, delta)); });
  m.def("_allocate", [](const EpidemicInstance& inst, const std::string& mode, double tol, std::size_t max_cuts) {
    return dump(cmd_allocate(inst, mode, {tol, max_cuts}));
  });
  m.def("_certify", [](const EpidemicInstance& inst, std::optional<std::string> allocation, std::size_t iterations) {
    std::optional<Json> a;
    if (allocation) a = Json::parse(*allocation);
    DualOptions opts;
    opts.iterations = iterations;
    return dump(cmd_certify(inst, a ? &*a : nullptr, opts));
  });
}
