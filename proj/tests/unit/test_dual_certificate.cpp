#include <doctest.h>

#include <cmath>
#include <random>

#include "epivax/combinatorial_alloc.hpp"
#include "epivax/dual_certificate.hpp"
#include "epivax/error.hpp"
#include "epivax/fractional_alloc.hpp"
#include "epivax/linalg.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace epivax;
using namespace epivax::testing;

namespace {

double top_value(const EpidemicInstance& inst) { return inst.weights().dot(inst.beta_hi()); }

Eigen::MatrixXd random_psd(Eigen::Index n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = normal(rng);
  return scale * g * g.transpose() / double(n);
}

// The two-point relaxation's dual optimum equals sum c_i bh_i minus the
// fractional optimum with reciprocal costs of scale c_i (bh_i - bl_i).
double dual_optimum_via_fractional(const EpidemicInstance& inst) {
  const EpidemicInstance rin(inst.graph(), inst.delta(), inst.beta_lo(), inst.beta_hi(), inst.eps(),
                             CostForm::reciprocal,
                             inst.weights().cwiseProduct(inst.beta_hi() - inst.beta_lo()));
  return top_value(inst) - solve_fractional(rin, {.tol = 1e-9, .max_cuts = 2000}).total_cost;
}

}  // namespace

TEST_CASE("dual_value at Z = 0 is the all-natural objective") {
  std::mt19937_64 rng(41);
  const auto inst = random_instance(7, rng, CostForm::affine);
  const auto dv = dual_value(Eigen::MatrixXd::Zero(7, 7), inst);
  CHECK(dv.value == doctest::Approx(top_value(inst)).epsilon(1e-15));
  CHECK((dv.u - inst.weights().cwiseProduct(inst.beta_hi())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("both branches tie at the fixing threshold") {
  std::mt19937_64 rng(42);
  const auto inst = random_instance(6, rng, CostForm::affine);
  const Eigen::VectorXd t = fixing_thresholds(inst);
  const Eigen::VectorXd s = inst.delta().array() - inst.eps();
  for (Eigen::Index i = 0; i < inst.size(); ++i) {
    const double c = inst.weights()(i), bh = inst.beta_hi()(i), bl = inst.beta_lo()(i);
    const double hi = c * bh + s(i) / bh * t(i);
    const double lo = c * bl + s(i) / bl * t(i);
    CHECK(std::abs(hi - lo) <= 1e-12 * std::max(1.0, std::abs(hi)));
  }
}

TEST_CASE("dual_value rejects non-PSD and misshapen Z") {
  const auto inst = EpidemicInstance::homogeneous(path_graph(2), 0.1, 0.01, 0.2, 0.0, CostForm::affine);
  Eigen::Matrix2d bad;
  bad << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(dual_value(bad, inst), DomainError);
  Eigen::Matrix2d asym;
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(dual_value(asym, inst), DomainError);
  CHECK_THROWS_AS(dual_value(Eigen::MatrixXd::Zero(3, 3), inst), DomainError);
  CHECK_THROWS_AS(solve_dual(inst, {.iterations = 0}), DomainError);
}

TEST_CASE("weak duality: random PSD Z bounds the exhaustive optimum") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(0.0, 3.0);
  int held = 0;
  const int trials = 500;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t n = 3 + std::size_t(trial % 10);
    const auto inst = random_instance(n, rng, CostForm::affine, 0.5);
    const double scale = fixing_thresholds(inst).mean() * unit(rng);
    const Eigen::MatrixXd z = random_psd(Eigen::Index(n), scale, rng);
    const double opt = exhaustive_discrete(inst).objective_cb;
    held += dual_value(z, inst).value >= opt - 1e-9;
  }
  CHECK(held == trials);
}

TEST_CASE("solve_dual: a single iteration returns the Z = 0 bound") {
  std::mt19937_64 rng(44);
  const auto inst = random_instance(8, rng, CostForm::affine);
  const auto cert = solve_dual(inst, {.iterations = 1});
  CHECK(cert.value == doctest::Approx(top_value(inst)).epsilon(1e-15));
  CHECK(cert.iterations == 1);
  CHECK(cert.z.isZero(0.0));
}

TEST_CASE("solve_dual: stable at the natural rates pins the value") {
  const auto inst = EpidemicInstance::homogeneous(path_graph(5), 0.5, 0.01, 0.05, 0.1, CostForm::affine);
  const double opt = exhaustive_discrete(inst).objective_cb;
  CHECK(opt == doctest::Approx(top_value(inst)));
  const auto cert = solve_dual(inst);
  CHECK(std::abs(cert.value - top_value(inst)) <= 1e-6);
}

TEST_CASE("solve_dual: graph without edges") {
  const auto inst = EpidemicInstance::homogeneous(Graph(4, {}), 0.2, 0.01, 0.3, 0.05, CostForm::affine);
  const auto cert = solve_dual(inst, {.iterations = 10});
  CHECK(cert.value == doctest::Approx(top_value(inst)));
  CHECK(cert.history.size() == 10);
}

TEST_CASE("solve_dual: certificate invariants on the n <= 12 suite") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t n = 4 + std::size_t(trial % 9);
    const auto inst = random_instance(n, rng, CostForm::affine, 0.5);
    const auto cert = solve_dual(inst, {.iterations = 600});
    const double opt = exhaustive_discrete(inst).objective_cb;

    CHECK(cert.value >= opt - 1e-9);
    CHECK(cert.value <= cert.history.front());
    CHECK(cert.history.size() == cert.iterations);
    for (std::size_t k = 1; k < cert.history.size(); ++k) CHECK(cert.history[k] <= cert.history[k - 1]);

    // Stored (Z, u) reproduce the value; every u_i sits on one branch exactly.
    CHECK(linalg::min_eigenvalue(cert.z) >= -1e-9 * std::max(1.0, cert.z.cwiseAbs().maxCoeff()));
    const auto dv = dual_value(cert.z, inst);
    CHECK(dv.value == doctest::Approx(cert.value).epsilon(1e-12));
    CHECK((dv.u - cert.u).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXd s = inst.delta().array() - inst.eps();
    for (Eigen::Index i = 0; i < inst.size(); ++i) {
      const double c = inst.weights()(i), bh = inst.beta_hi()(i), bl = inst.beta_lo()(i);
      const double hi = c * bh + s(i) / bh * cert.z(i, i);
      const double lo = c * bl + s(i) / bl * cert.z(i, i);
      CHECK(std::max(hi, lo) == cert.u(i));
    }
    CHECK(cert.value == doctest::Approx(cert.u.sum() - inst.graph().adjacency().cwiseProduct(cert.z).sum())
                            .epsilon(1e-12));
    CHECK(cert.eps == inst.eps());
  }
}

TEST_CASE("eps = 0 reduces to the plain delta_i / beta_i Lagrangian") {
  std::mt19937_64 rng(46);
  const auto base = random_instance(6, rng, CostForm::affine, 0.6, 0.0);
  REQUIRE(base.eps() == 0.0);
  const Eigen::MatrixXd z = random_psd(6, fixing_thresholds(base).mean(), rng);
  Eigen::VectorXd u(6);
  for (Eigen::Index i = 0; i < 6; ++i) {
    const double c = base.weights()(i), d = base.delta()(i);
    u(i) = std::max(c * base.beta_hi()(i) + d / base.beta_hi()(i) * z(i, i),
                    c * base.beta_lo()(i) + d / base.beta_lo()(i) * z(i, i));
  }
  const auto dv = dual_value(z, base);
  CHECK((dv.u - u).cwiseAbs().maxCoeff() == 0.0);
  CHECK(dv.value == doctest::Approx(u.sum() - base.graph().adjacency().cwiseProduct(z).sum()).epsilon(1e-14));
}

TEST_CASE("subgradient bound approaches the exact dual optimum") {
  std::mt19937_64 rng(47);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_instance(4 + std::size_t(trial % 5), rng, CostForm::affine, 0.6);
    const double exact = dual_optimum_via_fractional(inst);
    const auto cert = solve_dual(inst);
    CHECK(cert.value >= exact - 1e-7);
    worst = std::max(worst, (cert.value - exact) / exact);
  }
  MESSAGE("worst relative excess over the exact dual optimum " << worst);
  CHECK(worst <= 0.02);
}

TEST_CASE("threshold fixings") {
  std::mt19937_64 rng(48);
  const auto inst = random_instance(5, rng, CostForm::affine);
  DualCertificate cert;
  cert.z = Eigen::MatrixXd::Zero(5, 5);
  for (Fixing f : threshold_fixings(cert, inst)) CHECK(f == Fixing::force_hi);

  cert.z.diagonal() = fixing_thresholds(inst);
  for (Fixing f : threshold_fixings(cert, inst)) CHECK(f == Fixing::undetermined);

  cert.z.diagonal() = 2.0 * fixing_thresholds(inst);
  for (Fixing f : threshold_fixings(cert, inst)) CHECK(f == Fixing::force_lo);

  cert.z = Eigen::MatrixXd::Zero(4, 4);
  CHECK_THROWS_AS(threshold_fixings(cert, inst), DomainError);
  CHECK(to_string(Fixing::force_lo) == "force_lo");
}

TEST_CASE("threshold_start begins at the all-threshold diagonal") {
  std::mt19937_64 rng(49);
  const auto inst = random_instance(6, rng, CostForm::affine);
  const auto cert = solve_dual(inst, {.iterations = 1, .threshold_start = true});
  CHECK((cert.z.diagonal() - fixing_thresholds(inst)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(cert.value >= exhaustive_discrete(inst).objective_cb - 1e-9);
}

TEST_CASE("fixings agree with the exhaustive optimum (reported fraction)") {
  std::mt19937_64 rng(50);
  int labeled = 0, agreed = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_instance(4 + std::size_t(trial % 7), rng, CostForm::affine, 0.5);
    const auto cert = solve_dual(inst);
    const auto opt = exhaustive_discrete(inst);
    std::vector<char> in_opt(std::size_t(inst.size()), 0);
    for (int i : opt.vaccinated) in_opt[std::size_t(i)] = 1;
    const auto fix = threshold_fixings(cert, inst);
    for (std::size_t i = 0; i < fix.size(); ++i) {
      if (fix[i] == Fixing::undetermined) continue;
      ++labeled;
      agreed += (fix[i] == Fixing::force_lo) == bool(in_opt[i]);
    }
  }
  MESSAGE("fixings agreeing with the exhaustive optimum: " << agreed << "/" << labeled);
  CHECK(labeled > 0);
}

TEST_CASE("certificate gap is nonnegative for feasible allocations") {
  std::mt19937_64 rng(51);
  std::bernoulli_distribution coin(0.6);
  int feasible_seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = random_instance(4 + std::size_t(trial % 9), rng, CostForm::affine, 0.5);
    const auto cert = solve_dual(inst, {.iterations = 300});
    CHECK(certificate_gap(exhaustive_optimum(inst), cert) >= -1e-9);
    std::vector<int> set;
    for (int i = 0; i < inst.size(); ++i)
      if (coin(rng)) set.push_back(i);
    const auto alloc = make_allocation(inst, Method::greedy_forward, set, set);
    if (!inst.feasible(alloc.beta)) continue;
    ++feasible_seen;
    CHECK(certificate_gap(alloc, cert) >= -1e-9);
  }
  CHECK(feasible_seen > 0);
}
