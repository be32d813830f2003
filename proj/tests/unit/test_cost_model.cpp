#include <doctest.h>

#include <cmath>
#include <random>

#include "epivax/cost_model.hpp"
#include "epivax/error.hpp"

using namespace epivax;

TEST_CASE("cost: endpoints are exact") {
  for (CostForm form : {CostForm::reciprocal, CostForm::affine}) {
    const CostFunction f(0.013, 0.071, 3.7, form);
    CHECK(cost_eval(f, f.beta_hi) == 0.0);
    CHECK(cost_eval(f, f.beta_lo) == 3.7);
  }
}

TEST_CASE("cost: Fig. 1 reciprocal curve at beta = 3e-3") {
  const CostFunction f(1.75e-3, 8.66e-3, 1.0, CostForm::reciprocal);
  // (1/3e-3 - 1/8.66e-3) / (1/1.75e-3 - 1/8.66e-3), evaluated by hand.
  const double num = 1000.0 / 3.0 - 1.0 / 8.66e-3;
  const double den = 1.0 / 1.75e-3 - 1.0 / 8.66e-3;
  CHECK(cost_eval(f, 3e-3) == doctest::Approx(num / den).epsilon(1e-14));
  CHECK(std::abs(cost_eval(f, 3e-3) - 0.4778) <= 1e-4);
}

TEST_CASE("cost: affine midpoint") {
  const CostFunction f(0.1, 0.5, 2.0, CostForm::affine);
  CHECK(cost_eval(f, 0.3) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cost: domain and construction errors") {
  const CostFunction f(0.1, 0.5, 2.0, CostForm::reciprocal);
  CHECK_THROWS_AS(cost_eval(f, 0.09), DomainError);
  CHECK_THROWS_AS(cost_eval(f, 0.51), DomainError);
  CHECK_THROWS_AS(CostFunction(0.2, 0.2, 1.0, CostForm::reciprocal), DomainError);
  CHECK_THROWS_AS(CostFunction(0.0, 0.2, 1.0, CostForm::affine), DomainError);
  CHECK_THROWS_AS(CostFunction(0.1, 0.2, -1.0, CostForm::affine), DomainError);
  CHECK_THROWS_AS(parse_cost_form("tabulated"), DomainError);
  CHECK(parse_cost_form(to_string(CostForm::affine)) == CostForm::affine);
}

TEST_CASE("cost: strictly decreasing on 1000 sampled points") {
  for (CostForm form : {CostForm::reciprocal, CostForm::affine}) {
    const CostFunction f(1.75e-3, 8.66e-3, 1.0, form);
    double prev = cost_eval(f, f.beta_lo);
    for (int k = 1; k < 1000; ++k) {
      const double beta = f.beta_lo + (f.beta_hi - f.beta_lo) * k / 999.0;
      const double v = cost_eval(f, std::min(beta, f.beta_hi));
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("assumption 1: reciprocal passes, affine fails") {
  for (double lo : {1.75e-3, 0.05, 0.3}) {
    const CostFunction rec(lo, 5 * lo, 1.0, CostForm::reciprocal);
    const auto r = check_assumption1(rec, 64);
    CHECK(r.pass);
    CHECK(std::abs(r.worst_violation) <= 1e-6);

    const CostFunction aff(lo, 5 * lo, 1.0, CostForm::affine);
    const auto a = check_assumption1(aff, 64);
    CHECK_FALSE(a.pass);
    // f'' = 0, so the normalized residual is exactly 1.
    CHECK(a.worst_violation == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(check_assumption1(CostFunction(0.1, 0.2, 1, CostForm::affine), 7), DomainError);
}

TEST_CASE("assumption 1 is equivalent to convexity of gamma -> f(1/gamma)") {
  for (CostForm form : {CostForm::reciprocal, CostForm::affine}) {
    const CostFunction f(0.02, 0.1, 1.0, form);
    const double glo = 1.0 / f.beta_hi, ghi = 1.0 / f.beta_lo;
    const double h = (ghi - glo) / 1e4;
    double worst = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double g = glo + (ghi - glo) * k / 100.0;
      const double second = (f(1.0 / (g + h)) - 2 * f(1.0 / g) + f(1.0 / (g - h))) / (h * h);
      worst = std::min(worst, second);
    }
    if (check_assumption1(f).pass)
      CHECK(worst >= -1e-6);
    else
      CHECK(worst < 0.0);
  }
}

TEST_CASE("total cost and the trace transform") {
  const double lo = 0.02, hi = 0.1, t = 1.5;
  const std::size_t n = 9;
  const std::vector<CostFunction> fs(n, CostFunction(lo, hi, t, CostForm::reciprocal));
  CHECK(total_cost(fs, Eigen::VectorXd::Constant(n, hi)) == 0.0);
  CHECK(total_cost(fs, Eigen::VectorXd::Constant(n, lo)) == doctest::Approx(n * t).epsilon(1e-14));

  const auto tr = trace_transform(fs);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(lo, hi);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd beta(n);
    for (auto& b : beta) b = u(rng);
    // Independent summation in gamma space.
    double trace = 0.0, direct = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      trace += 1.0 / beta(Eigen::Index(i));
      direct += t * (1.0 / beta(Eigen::Index(i)) - 1.0 / hi) / (1.0 / lo - 1.0 / hi);
    }
    CHECK(std::abs(tr.a * trace - tr.b - total_cost(fs, beta)) <= 1e-10);
    CHECK(std::abs(direct - total_cost(fs, beta)) <= 1e-10);
  }

  std::vector<CostFunction> mixed = fs;
  mixed[2] = CostFunction(lo, hi, t, CostForm::affine);
  CHECK_THROWS_AS(trace_transform(mixed), DomainError);
  CHECK_THROWS_AS(total_cost(fs, Eigen::VectorXd::Constant(3, hi)), DomainError);
}
