#include "epivax/fractional_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "epivax/box_lp.hpp"
#include "epivax/error.hpp"
#include "epivax/linalg.hpp"

namespace epivax {

CutBudgetExhausted::CutBudgetExhausted(FractionalAllocation incumbent, double gap)
    : std::runtime_error("cutting plane did not converge within the cut budget (gap " +
                         std::to_string(gap) + ")"),
      incumbent_(std::move(incumbent)),
      gap_(gap) {}

namespace {

constexpr std::size_t kMaxCutsPerRound = 5;
constexpr double kDegenerateWindow = 1e-9;

class CuttingPlane {
 public:
  CuttingPlane(const EpidemicInstance& inst, Eigen::VectorXd weights, double offset)
      : inst_(inst), w_(std::move(weights)), offset_(offset) {
    lo_ = inst.beta_hi().cwiseInverse();
    hi_ = inst.beta_lo().cwiseInverse();
    slope_ = inst.delta().array() - inst.eps();
    base_ = -inst.graph().adjacency();
    base_.diagonal() += slope_.cwiseProduct(lo_);  // M(lo)
  }

  FractionalAllocation run(const CuttingPlaneOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("tol must be positive");
    const Eigen::Index n = inst_.size();
    BoxLP lp(w_, (hi_ - lo_).cwiseMax(0.0));

    FractionalAllocation best;
    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<double> bounds;

    for (;;) {
      const auto sol = lp.solve();
      const Eigen::VectorXd gamma = lo_ + sol.x;
      const double relaxed = sol.objective + w_.dot(lo_) + offset_;
      bounds.push_back(relaxed);

      const auto es = linalg::decompose(matrix(gamma));
      const double lambda_min = es.eigenvalues()(0);
      if (lambda_min >= -opts.tol) return finish(gamma, lp.num_cuts(), std::move(bounds));

      const Eigen::VectorXd candidate = incumbent(gamma);
      const double obj = w_.dot(candidate) + offset_;
      if (obj < best_obj) {
        best_obj = obj;
        best.gamma = candidate;
      }
      if (best_obj - relaxed <= opts.tol * (1.0 + std::abs(best_obj)))
        return finish(best.gamma, lp.num_cuts(), std::move(bounds));

      if (lp.num_cuts() >= opts.max_cuts) {
        auto out = finish(best.gamma, lp.num_cuts(), std::move(bounds));
        throw CutBudgetExhausted(std::move(out), best_obj - relaxed);
      }
      for (Eigen::Index k = 0; k < n && k < Eigen::Index(kMaxCutsPerRound); ++k) {
        if (es.eigenvalues()(k) > lambda_min + kDegenerateWindow) break;
        if (lp.num_cuts() >= opts.max_cuts) break;
        add_cut(lp, es.eigenvectors().col(k));
      }
    }
  }

 private:
  Eigen::MatrixXd matrix(const Eigen::VectorXd& gamma) const {
    Eigen::MatrixXd m = base_;
    m.diagonal() += slope_.cwiseProduct(gamma - lo_);
    return m;
  }

  // v^T M(gamma) v >= 0 written in x = gamma - lo.
  void add_cut(BoxLP& lp, const Eigen::VectorXd& v) const {
    const Eigen::VectorXd coeffs = v.cwiseAbs2().cwiseProduct(slope_);
    lp.add_cut(coeffs, -v.dot(base_ * v));
  }

  // Smallest theta in [0, 1] with M(gamma + theta (hi - gamma)) PSD. The
  // minimum eigenvalue is concave along the segment and nonnegative at hi, so
  // the feasible thetas form an interval ending at 1.
  Eigen::VectorXd incumbent(const Eigen::VectorXd& gamma) const {
    const Eigen::VectorXd dir = (hi_ - gamma).cwiseMax(0.0);
    const Eigen::VectorXd push = slope_.cwiseProduct(dir);
    const Eigen::MatrixXd m = matrix(gamma);
    auto point = [&](double theta) { return Eigen::VectorXd((gamma + theta * dir).cwiseMin(hi_)); };
    auto ok = [&](double theta) {
      return linalg::min_eigenvalue(matrix(point(theta))) >= -kFeasibilitySlack;
    };

    double theta = 1.0;
    if (push.minCoeff() > 0.0) {
      // M + theta diag(push) >= 0  <=>  theta >= -lambda_min(P^-1/2 M P^-1/2).
      const Eigen::VectorXd s = push.cwiseSqrt().cwiseInverse();
      const Eigen::MatrixXd scaled = s.asDiagonal() * m * s.asDiagonal();
      theta = std::clamp(-linalg::min_eigenvalue(scaled), 0.0, 1.0);
      if (ok(theta)) return point(theta);
    }
    double lo = 0.0, hi = 1.0;
    if (theta < 1.0) lo = theta;
    for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? hi : lo) = mid;
    }
    return point(hi);
  }

  FractionalAllocation finish(const Eigen::VectorXd& gamma, std::size_t cuts,
                              std::vector<double> bounds) const {
    FractionalAllocation out;
    out.beta = gamma.cwiseInverse().cwiseMax(inst_.beta_lo()).cwiseMin(inst_.beta_hi());
    out.gamma = out.beta.cwiseInverse();
    out.total_cost = inst_.total_cost(out.beta);
    out.margin = inst_.margin(out.beta);
    out.cuts = cuts;
    out.lower_bounds = std::move(bounds);
    return out;
  }

  const EpidemicInstance& inst_;
  Eigen::VectorXd w_;
  double offset_;
  Eigen::VectorXd lo_, hi_, slope_;
  Eigen::MatrixXd base_;
};

}  // namespace

FractionalAllocation solve_fractional(const EpidemicInstance& inst, const CuttingPlaneOptions& opts) {
  if (inst.cost_form() != CostForm::reciprocal)
    throw DomainError("the fractional solver needs reciprocal costs (affine costs are not convex in 1/beta)");
  const Eigen::Index n = inst.size();
  // f_i(1/gamma) = w_i (gamma - 1/beta_hi_i) with w_i = T_i / (1/beta_lo_i - 1/beta_hi_i).
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (inst.beta_lo()(i) < inst.beta_hi()(i))
      w(i) = inst.weights()(i) / (1.0 / inst.beta_lo()(i) - 1.0 / inst.beta_hi()(i));
  const double offset = -w.dot(inst.beta_hi().cwiseInverse());
  return CuttingPlane(inst, w, offset).run(opts);
}

FractionalAllocation solve_trace_sdp(const EpidemicInstance& inst, const CuttingPlaneOptions& opts) {
  const Eigen::Index n = inst.size();
  if (inst.cost_form() != CostForm::reciprocal)
    throw DomainError("the trace program needs reciprocal costs");
  for (Eigen::Index i = 1; i < n; ++i)
    if (inst.delta()(i) != inst.delta()(0) || inst.beta_lo()(i) != inst.beta_lo()(0) ||
        inst.beta_hi()(i) != inst.beta_hi()(0) || inst.weights()(i) != inst.weights()(0))
      throw DomainError("the trace program needs homogeneous delta, bounds and cost scale");
  if (!(inst.beta_lo()(0) < inst.beta_hi()(0)))
    throw DomainError("the trace program needs beta_lo < beta_hi");
  const std::vector<CostFunction> fs(
      std::size_t(n), CostFunction(inst.beta_lo()(0), inst.beta_hi()(0), inst.weights()(0),
                                   CostForm::reciprocal));
  const TraceTransform tr = trace_transform(fs);

  auto out = CuttingPlane(inst, Eigen::VectorXd::Ones(n), 0.0).run(opts);
  out.total_cost = tr.a * out.gamma.sum() - tr.b;
  return out;
}

VerificationReport verify_allocation(const EpidemicInstance& inst, const Eigen::VectorXd& beta) {
  VerificationReport r;
  r.cost = inst.total_cost(beta);
  r.margin = inst.margin(beta);
  r.feasible = r.margin >= -kVerificationSlack;
  return r;
}

}  // namespace epivax
