#include "epivax/box_lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "epivax/error.hpp"

namespace epivax {

namespace {

constexpr std::size_t kRefactorInterval = 100;
constexpr std::size_t kBlandAfterDegenerate = 30;

}  // namespace

BoxLP::BoxLP(Eigen::VectorXd w, Eigen::VectorXd u) : w_(std::move(w)), u_(std::move(u)) {
  const Eigen::Index n = w_.size();
  if (u_.size() != n) throw DomainError("BoxLP: cost and bound vectors differ in length");
  if (n == 0) throw DomainError("BoxLP: empty problem");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(w_(i) >= 0.0) || !std::isfinite(w_(i)))
      throw DomainError("BoxLP: cost[" + std::to_string(i) + "] must be nonnegative");
    if (!(u_(i) >= 0.0) || !std::isfinite(u_(i)))
      throw DomainError("BoxLP: upper[" + std::to_string(i) + "] must be nonnegative");
  }
  tableau_.resize(n, 2 * n);
  tableau_ << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
  values_ = w_;
  reduced_.resize(2 * n);
  reduced_ << Eigen::VectorXd::Zero(n), -u_;
  basis_.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) basis_[std::size_t(i)] = i;
}

void BoxLP::add_cut(const Eigen::VectorXd& coeffs, double rhs) {
  const Eigen::Index n = dim();
  if (coeffs.size() != n) throw DomainError("BoxLP: cut has the wrong dimension");
  if (!coeffs.allFinite() || !std::isfinite(rhs)) throw DomainError("BoxLP: non-finite cut");
  cuts_.push_back(coeffs);
  rhs_.push_back(rhs);

  const Eigen::Index col = tableau_.cols();
  tableau_.conservativeResize(Eigen::NoChange, col + 1);
  tableau_.col(col) = tableau_.leftCols(n) * coeffs;
  // Multipliers pi_i = -reduced cost of slack i.
  reduced_.conservativeResize(col + 1);
  reduced_(col) = rhs + reduced_.head(n).dot(coeffs);
}

Eigen::VectorXd BoxLP::original_column(Eigen::Index col) const {
  const Eigen::Index n = dim();
  if (col < n) return Eigen::VectorXd::Unit(n, col);
  if (col < 2 * n) return -Eigen::VectorXd::Unit(n, col - n);
  return cuts_[std::size_t(col - 2 * n)];
}

double BoxLP::column_cost(Eigen::Index col) const {
  const Eigen::Index n = dim();
  if (col < n) return 0.0;
  if (col < 2 * n) return -u_(col - n);
  return rhs_[std::size_t(col - 2 * n)];
}

void BoxLP::refactor() {
  const Eigen::Index n = dim();
  const Eigen::Index cols = tableau_.cols();
  Eigen::MatrixXd basis_matrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i) basis_matrix.col(i) = original_column(basis_[std::size_t(i)]);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);

  Eigen::MatrixXd full(n, cols);
  for (Eigen::Index j = 0; j < cols; ++j) full.col(j) = original_column(j);
  tableau_ = lu.solve(full);
  values_ = lu.solve(w_);

  Eigen::VectorXd basic_cost(n);
  for (Eigen::Index i = 0; i < n; ++i) basic_cost(i) = column_cost(basis_[std::size_t(i)]);
  const Eigen::VectorXd pi = tableau_.leftCols(n).transpose() * basic_cost;
  for (Eigen::Index j = 0; j < cols; ++j) reduced_(j) = column_cost(j) - pi.dot(full.col(j));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index b = basis_[std::size_t(i)];
    tableau_.col(b).setZero();
    tableau_(i, b) = 1.0;
    reduced_(b) = 0.0;
  }
  pivots_since_refactor_ = 0;
}

void BoxLP::pivot(Eigen::Index row, Eigen::Index col) {
  const double p = tableau_(row, col);
  tableau_.row(row) /= p;
  values_(row) /= p;
  Eigen::VectorXd factor = tableau_.col(col);
  factor(row) = 0.0;
  const Eigen::RowVectorXd pivot_row = tableau_.row(row);
  tableau_.noalias() -= factor * pivot_row;
  values_ -= factor * values_(row);
  reduced_ -= reduced_(col) * pivot_row.transpose();
  tableau_.col(col).setZero();
  tableau_(row, col) = 1.0;
  reduced_(col) = 0.0;
  basis_[std::size_t(row)] = col;
  ++pivots_since_refactor_;
}

BoxLP::Solution BoxLP::solve() {
  const Eigen::Index n = dim();
  double cost_scale = std::max(1.0, u_.maxCoeff());
  for (double r : rhs_) cost_scale = std::max(cost_scale, std::abs(r));
  const double reduced_tol = 1e-11 * cost_scale;
  const std::size_t max_pivots = 50 * static_cast<std::size_t>(tableau_.cols()) + 1000;

  std::size_t pivots = 0, degenerate_run = 0;
  for (;;) {
    if (pivots_since_refactor_ >= kRefactorInterval) refactor();

    Eigen::Index enter = -1;
    if (degenerate_run < kBlandAfterDegenerate) {
      double best = reduced_tol;
      for (Eigen::Index j = 0; j < reduced_.size(); ++j)
        if (reduced_(j) > best) {
          best = reduced_(j);
          enter = j;
        }
    } else {
      for (Eigen::Index j = 0; j < reduced_.size(); ++j)
        if (reduced_(j) > reduced_tol) {
          enter = j;
          break;
        }
    }
    if (enter < 0) break;

    const auto column = tableau_.col(enter);
    const double pivot_tol = std::max(1e-14, 1e-11 * column.cwiseAbs().maxCoeff());
    Eigen::Index leave = -1;
    double best_ratio = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (column(i) <= pivot_tol) continue;
      const double ratio = std::max(values_(i), 0.0) / column(i);
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis_[std::size_t(i)] < basis_[std::size_t(leave)])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) throw DomainError("BoxLP: cuts exclude every point of the box");

    degenerate_run = best_ratio == 0.0 ? degenerate_run + 1 : 0;
    pivot(leave, enter);
    if (++pivots > max_pivots) throw DomainError("BoxLP: pivot limit reached");
  }

  Solution sol;
  sol.x = (-reduced_.head(n)).cwiseMax(0.0).cwiseMin(u_);
  sol.objective = w_.dot(sol.x);
  sol.pivots = pivots;
  return sol;
}

}  // namespace epivax
