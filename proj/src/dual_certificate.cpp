#include "epivax/dual_certificate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epivax/error.hpp"
#include "epivax/linalg.hpp"
#include "epivax/spectral.hpp"

namespace epivax {

namespace {

struct Branches {
  Eigen::VectorXd u;
  Eigen::VectorXd slope;  // (delta_i - eps) / beta_i* at the active branch
};

Branches evaluate_branches(const Eigen::VectorXd& diag, const EpidemicInstance& inst) {
  const Eigen::VectorXd s = inst.delta().array() - inst.eps();
  const Eigen::VectorXd& c = inst.weights();
  const Eigen::VectorXd& bh = inst.beta_hi();
  const Eigen::VectorXd& bl = inst.beta_lo();
  Branches out{Eigen::VectorXd(diag.size()), Eigen::VectorXd(diag.size())};
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double hi = c(i) * bh(i) + s(i) / bh(i) * diag(i);
    const double lo = c(i) * bl(i) + s(i) / bl(i) * diag(i);
    // Ties take the natural-rate branch.
    if (hi >= lo) {
      out.u(i) = hi;
      out.slope(i) = s(i) / bh(i);
    } else {
      out.u(i) = lo;
      out.slope(i) = s(i) / bl(i);
    }
  }
  return out;
}

double objective(const Eigen::MatrixXd& z, const Eigen::VectorXd& u, const Eigen::MatrixXd& a) {
  return u.sum() - a.cwiseProduct(z).sum();
}

}  // namespace

DualValue dual_value(const Eigen::MatrixXd& z, const EpidemicInstance& inst) {
  const Eigen::Index n = inst.size();
  if (z.rows() != n || z.cols() != n) throw DomainError("Z must be n x n");
  const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
  if ((z - z.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) throw DomainError("Z is not symmetric");
  if (n > 0 && linalg::min_eigenvalue(0.5 * (z + z.transpose())) < -1e-9 * scale)
    throw DomainError("Z is not positive semidefinite");
  auto br = evaluate_branches(z.diagonal(), inst);
  const double value = objective(z, br.u, inst.graph().adjacency());
  return {value, std::move(br.u)};
}

DualCertificate solve_dual(const EpidemicInstance& inst, const DualOptions& opts) {
  if (opts.iterations < 1) throw DomainError("solve_dual needs at least one iteration");
  const Eigen::Index n = inst.size();
  const Eigen::MatrixXd& a = inst.graph().adjacency();

  DualCertificate cert;
  cert.eps = inst.eps();
  cert.z = Eigen::MatrixXd::Zero(n, n);
  if (opts.threshold_start) cert.z.diagonal() = fixing_thresholds(inst);
  auto br = evaluate_branches(cert.z.diagonal(), inst);
  cert.u = br.u;
  cert.value = objective(cert.z, br.u, a);
  cert.history.push_back(cert.value);
  cert.iterations = 1;

  const double a_norm = a.norm();
  cert.step0 = opts.step0 > 0.0 ? opts.step0 : (n > 0 && a_norm > 0.0 ? br.u.sum() / (double(n) * a_norm) : 0.0);
  if (a_norm == 0.0) {
    // No edges: Z = 0 already gives sum c_i bh_i, which every allocation attains.
    cert.z.setZero();
    cert.u = evaluate_branches(cert.z.diagonal(), inst).u;
    cert.value = cert.u.sum();
    cert.history.assign(opts.iterations, cert.value);
    cert.iterations = opts.iterations;
    return cert;
  }

  Eigen::MatrixXd z = cert.z;
  for (std::size_t k = 1; k < opts.iterations; ++k) {
    Eigen::MatrixXd step = -a;
    step.diagonal() += br.slope;
    z = psd_project(z - (cert.step0 / std::sqrt(double(k))) * step);
    br = evaluate_branches(z.diagonal(), inst);
    const double value = objective(z, br.u, a);
    if (value < cert.value) {
      cert.value = value;
      cert.z = z;
      cert.u = br.u;
    }
    cert.history.push_back(cert.value);
    ++cert.iterations;
  }
  return cert;
}

std::string_view to_string(Fixing f) {
  switch (f) {
    case Fixing::force_hi: return "force_hi";
    case Fixing::force_lo: return "force_lo";
    case Fixing::undetermined: return "undetermined";
  }
  return "?";
}

Eigen::VectorXd fixing_thresholds(const EpidemicInstance& inst) {
  const Eigen::VectorXd s = inst.delta().array() - inst.eps();
  return (inst.weights().array() * inst.beta_hi().array() * inst.beta_lo().array() / s.array()).matrix();
}

std::vector<Fixing> threshold_fixings(const DualCertificate& cert, const EpidemicInstance& inst,
                                      double relative_slack) {
  const Eigen::Index n = inst.size();
  if (cert.z.rows() != n) throw DomainError("certificate does not match the instance");
  const Eigen::VectorXd t = fixing_thresholds(inst);
  std::vector<Fixing> out(static_cast<std::size_t>(n), Fixing::undetermined);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double slack = relative_slack * t(i);
    const double zii = cert.z(i, i);
    if (zii < t(i) - slack)
      out[std::size_t(i)] = Fixing::force_hi;
    else if (zii > t(i) + slack)
      out[std::size_t(i)] = Fixing::force_lo;
  }
  return out;
}

double certificate_gap(const DiscreteAllocation& alloc, const DualCertificate& cert) {
  return cert.value - alloc.objective_cb;
}

}  // namespace epivax
