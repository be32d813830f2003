#include "epivax/serialization.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "epivax/error.hpp"
#include "epivax/spectral.hpp"

namespace epivax {

namespace {

const Json& require_field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path.empty() ? "$" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "expected a finite number");
  return v;
}

std::vector<double> scalar_or_list(const Json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path)};
  if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a number or a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Eigen::VectorXd broadcast(const std::vector<double>& v, Eigen::Index n, const std::string& path) {
  if (v.size() == 1) return Eigen::VectorXd::Constant(n, v.front());
  if (Eigen::Index(v.size()) != n)
    throw SchemaError(path, "has " + std::to_string(v.size()) + " entries but the graph has " + std::to_string(n) +
                                " nodes");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), n);
}

}  // namespace

InstanceSpec parse_instance_spec(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw SchemaError("$", "parameter file must hold a JSON object");
  InstanceSpec spec;
  const Json& graph = require_field(j, "graph_path", "");
  if (!graph.is_string()) throw SchemaError("graph_path", "expected a string");
  std::filesystem::path gp = graph.get<std::string>();
  if (gp.is_relative() && !base_dir.empty()) gp = base_dir / gp;
  spec.graph_path = gp.lexically_normal().string();

  spec.delta = scalar_or_list(require_field(j, "delta", ""), "delta");
  for (std::size_t i = 0; i < spec.delta.size(); ++i)
    if (!(spec.delta[i] > 0.0)) throw SchemaError("delta[" + std::to_string(i) + "]", "must be positive");

  const bool has_mult = j.contains("beta_bar_multiplier");
  const bool has_list = j.contains("beta_bar");
  if (has_mult == has_list) throw SchemaError("beta_bar_multiplier", "give exactly one of beta_bar_multiplier and beta_bar");
  if (has_mult) {
    const double m = number(j["beta_bar_multiplier"], "beta_bar_multiplier");
    if (!(m > 0.0)) throw SchemaError("beta_bar_multiplier", "must be positive");
    spec.beta_bar_multiplier = m;
  } else {
    spec.beta_bar = scalar_or_list(j["beta_bar"], "beta_bar");
    for (std::size_t i = 0; i < spec.beta_bar.size(); ++i)
      if (!(spec.beta_bar[i] > 0.0)) throw SchemaError("beta_bar[" + std::to_string(i) + "]", "must be positive");
  }

  if (j.contains("vaccine_effect")) {
    spec.vaccine_effect = number(j["vaccine_effect"], "vaccine_effect");
    if (!(spec.vaccine_effect > 0.0 && spec.vaccine_effect < 1.0))
      throw SchemaError("vaccine_effect", "must lie in (0, 1)");
  }
  if (j.contains("eps")) {
    spec.eps = number(j["eps"], "eps");
    if (!(spec.eps >= 0.0)) throw SchemaError("eps", "must be nonnegative");
  }
  double min_delta = spec.delta.front();
  for (double d : spec.delta) min_delta = std::min(min_delta, d);
  if (!(spec.eps < min_delta)) throw SchemaError("eps", "must be below min delta");

  if (j.contains("cost")) {
    const Json& cost = j["cost"];
    if (!cost.is_object()) throw SchemaError("cost", "expected an object");
    if (cost.contains("form")) {
      if (!cost["form"].is_string()) throw SchemaError("cost.form", "expected a string");
      try {
        spec.cost_form = parse_cost_form(cost["form"].get<std::string>());
      } catch (const DomainError& e) {
        throw SchemaError("cost.form", e.what());
      }
    }
    if (cost.contains("weights")) {
      spec.cost_weights = scalar_or_list(cost["weights"], "cost.weights");
      for (std::size_t i = 0; i < spec.cost_weights.size(); ++i)
        if (!(spec.cost_weights[i] >= 0.0))
          throw SchemaError("cost.weights[" + std::to_string(i) + "]", "must be nonnegative");
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
      throw SchemaError("seed", "expected a nonnegative integer");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  return spec;
}

InstanceSpec load_instance_spec(const std::string& path) {
  return parse_instance_spec(read_json_file(path), std::filesystem::path(path).parent_path());
}

EpidemicInstance build_instance(const InstanceSpec& spec, const Graph& g) {
  const auto n = Eigen::Index(g.num_nodes());
  const Eigen::VectorXd delta = broadcast(spec.delta, n, "delta");
  Eigen::VectorXd beta_hi;
  if (spec.beta_bar_multiplier) {
    const double lambda1 = adjacency_spectral_radius(g);
    if (!(lambda1 > 0.0)) throw SchemaError("beta_bar_multiplier", "graph has no edges, so beta_c is undefined");
    beta_hi = *spec.beta_bar_multiplier * delta / lambda1;
  } else {
    beta_hi = broadcast(spec.beta_bar, n, "beta_bar");
  }
  return EpidemicInstance(g, delta, spec.vaccine_effect * beta_hi, beta_hi, spec.eps, spec.cost_form,
                          broadcast(spec.cost_weights, n, "cost.weights"));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON in ") + path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd read_vector(const Json& j, const std::string& key, Eigen::Index n) {
  const Json& arr = require_field(j, key, "");
  if (!arr.is_array()) throw SchemaError(key, "expected an array of numbers");
  if (Eigen::Index(arr.size()) != n)
    throw SchemaError(key, "has " + std::to_string(arr.size()) + " entries, expected " + std::to_string(n));
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = number(arr[std::size_t(i)], key + "[" + std::to_string(i) + "]");
  return out;
}

Json to_json(const FractionalAllocation& a) {
  Json j;
  j["gamma"] = vector_json(a.gamma);
  j["beta"] = vector_json(a.beta);
  j["total_cost"] = a.total_cost;
  j["margin"] = a.margin;
  j["cuts"] = a.cuts;
  return j;
}

Json to_json(const DiscreteAllocation& a) {
  Json j;
  j["method"] = std::string(to_string(a.method));
  j["vaccinated"] = a.vaccinated;
  j["objective_cb"] = a.objective_cb;
  j["total_cost"] = a.total_cost;
  j["margin"] = a.margin;
  j["order"] = a.order;
  j["beta"] = vector_json(a.beta);
  return j;
}

Json to_json(const DualCertificate& cert, const std::vector<Fixing>& fixings, std::optional<double> gap) {
  Json j;
  j["value"] = cert.value;
  j["gap"] = gap ? Json(*gap) : Json(nullptr);
  j["iterations"] = cert.iterations;
  j["eps"] = cert.eps;
  j["step0"] = cert.step0;
  Json fx = {{"force_hi", Json::array()}, {"force_lo", Json::array()}, {"undetermined", Json::array()}};
  for (std::size_t i = 0; i < fixings.size(); ++i) fx[std::string(to_string(fixings[i]))].push_back(i);
  j["fixings"] = fx;
  return j;
}

Json verification_json(const EpidemicInstance& inst, const Eigen::VectorXd& beta) {
  const auto v = verify_allocation(inst, beta);
  return {{"margin", v.margin}, {"cost", v.cost}, {"objective_cb", inst.weights().dot(beta)},
          {"feasible", v.feasible}};
}

std::string matrix_csv(const Eigen::MatrixXd& z) {
  std::ostringstream out;
  out.precision(17);
  out << "i,j,z\n";
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      if (z(i, j) != 0.0) out << i << ',' << j << ',' << z(i, j) << '\n';
  return out.str();
}

}  // namespace epivax
