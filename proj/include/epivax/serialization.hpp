#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "epivax/combinatorial_alloc.hpp"
#include "epivax/cost_model.hpp"
#include "epivax/dual_certificate.hpp"
#include "epivax/fractional_alloc.hpp"
#include "epivax/instance.hpp"

namespace epivax {

using Json = nlohmann::ordered_json;

/// Parameter file contents. Single-element `delta`, `beta_bar` and
/// `cost_weights` broadcast to every node.
struct InstanceSpec {
  std::string graph_path;  // resolved against the parameter file's directory
  std::vector<double> delta;
  std::optional<double> beta_bar_multiplier;  // beta_hi_i = m * delta_i / lambda_1
  std::vector<double> beta_bar;               // explicit alternative
  double vaccine_effect = 0.2;                // beta_lo / beta_hi
  double eps = 0.0;
  CostForm cost_form = CostForm::reciprocal;
  std::vector<double> cost_weights{1.0};
  std::uint64_t seed = 0;
};

/// Throws SchemaError naming the offending field. A relative graph_path is
/// resolved against `base_dir`.
InstanceSpec parse_instance_spec(const Json& j, const std::filesystem::path& base_dir = {});
InstanceSpec load_instance_spec(const std::string& path);

/// Throws SchemaError for per-node lists whose length differs from the graph,
/// InfeasibleInstance when full vaccination cannot stabilize it.
EpidemicInstance build_instance(const InstanceSpec& spec, const Graph& g);

Json read_json_file(const std::string& path);
/// Writes `text` to `path`, or to stdout when `path` is empty or "-".
void write_text(const std::string& path, const std::string& text);
/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

Json vector_json(const Eigen::VectorXd& v);
/// Reads j[key] as a length-n number array; SchemaError paths look like "beta[3]".
Eigen::VectorXd read_vector(const Json& j, const std::string& key, Eigen::Index n);

Json to_json(const FractionalAllocation& a);
Json to_json(const DiscreteAllocation& a);
/// {"value", "gap", "iterations", "eps", "step0", "fixings": {...}}; gap is
/// null without an allocation.
Json to_json(const DualCertificate& cert, const std::vector<Fixing>& fixings, std::optional<double> gap);

/// Independent recomputation of margin and cost for the stored beta.
Json verification_json(const EpidemicInstance& inst, const Eigen::VectorXd& beta);

/// "i,j,z" rows for the nonzero entries of Z.
std::string matrix_csv(const Eigen::MatrixXd& z);

}  // namespace epivax
