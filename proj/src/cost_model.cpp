#include "epivax/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "epivax/error.hpp"

namespace epivax {

std::string_view to_string(CostForm form) {
  return form == CostForm::reciprocal ? "reciprocal" : "affine";
}

CostForm parse_cost_form(std::string_view text) {
  if (text == "reciprocal") return CostForm::reciprocal;
  if (text == "affine") return CostForm::affine;
  throw DomainError("unknown cost form '" + std::string(text) + "'");
}

CostFunction::CostFunction(double lo, double hi, double t, CostForm f)
    : beta_lo(lo), beta_hi(hi), t_max(t), form(f) {
  if (!(beta_lo > 0.0) || !std::isfinite(beta_lo))
    throw DomainError("beta_lo must be positive and finite");
  if (!(beta_hi > beta_lo) || !std::isfinite(beta_hi))
    throw DomainError("beta_hi must exceed beta_lo");
  if (!(t_max >= 0.0) || !std::isfinite(t_max))
    throw DomainError("cost scale must be nonnegative and finite");
}

double CostFunction::operator()(double beta) const {
  if (form == CostForm::reciprocal)
    return t_max * (1.0 / beta - 1.0 / beta_hi) / (1.0 / beta_lo - 1.0 / beta_hi);
  return t_max * (beta - beta_hi) / (beta_lo - beta_hi);
}

double CostFunction::derivative(double beta) const {
  if (form == CostForm::reciprocal)
    return -t_max / (beta * beta) / (1.0 / beta_lo - 1.0 / beta_hi);
  return t_max / (beta_lo - beta_hi);
}

double cost_eval(const CostFunction& f, double beta) {
  if (!(beta >= f.beta_lo && beta <= f.beta_hi))
    throw DomainError("beta = " + std::to_string(beta) + " lies outside [" +
                      std::to_string(f.beta_lo) + ", " + std::to_string(f.beta_hi) + "]");
  return f(beta);
}

Assumption1Report check_assumption1(const CostFunction& f, std::size_t grid_points) {
  if (grid_points < 8) throw DomainError("check_assumption1 needs at least 8 grid points");
  const double h = (f.beta_hi - f.beta_lo) / 1e4;
  const double lo = f.beta_lo + h, hi = f.beta_hi - h;

  Assumption1Report report;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double beta = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid_points - 1);
    const double fp = f(beta + h), f0 = f(beta), fm = f(beta - h);
    const double d1 = (fp - fm) / (2.0 * h);
    const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
    const double rhs = 2.0 * d1 / beta;
    const double scale = std::max(std::abs(d2), std::abs(rhs));
    const double residual = scale > 0.0 ? -(d2 + rhs) / scale : 0.0;
    if (residual > report.worst_violation) {
      report.worst_violation = residual;
      report.worst_beta = beta;
    }
  }
  report.pass = report.worst_violation <= kAssumption1Tolerance;
  return report;
}

double total_cost(const std::vector<CostFunction>& fs, const Eigen::VectorXd& beta) {
  if (fs.size() != static_cast<std::size_t>(beta.size()))
    throw DomainError("cost functions and beta differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) sum += cost_eval(fs[i], beta(Eigen::Index(i)));
  return sum;
}

TraceTransform trace_transform(const std::vector<CostFunction>& fs) {
  if (fs.empty()) throw DomainError("no cost functions");
  const CostFunction& f0 = fs.front();
  for (const auto& f : fs)
    if (f.form != CostForm::reciprocal || f.beta_lo != f0.beta_lo || f.beta_hi != f0.beta_hi ||
        f.t_max != f0.t_max)
      throw DomainError("trace form needs identical reciprocal costs on every node");
  const double a = f0.t_max / (1.0 / f0.beta_lo - 1.0 / f0.beta_hi);
  return {a, a * static_cast<double>(fs.size()) / f0.beta_hi};
}

}  // namespace epivax
