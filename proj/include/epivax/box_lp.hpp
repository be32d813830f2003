#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace epivax {

/// min w.x  s.t.  c_j.x >= r_j (cuts),  0 <= x <= u,  with w >= 0.
///
/// Solved through its dual  max r.y - u.z  s.t.  C^T y - z <= w,  y, z >= 0,
/// whose origin is always feasible because w >= 0. Cuts become new dual
/// columns, so re-solving after add_cut continues from the previous optimal
/// basis. The primal point is read off the simplex multipliers.
class BoxLP {
 public:
  BoxLP(Eigen::VectorXd w, Eigen::VectorXd u);

  void add_cut(const Eigen::VectorXd& coeffs, double rhs);
  std::size_t num_cuts() const noexcept { return rhs_.size(); }
  Eigen::Index dim() const noexcept { return w_.size(); }

  struct Solution {
    Eigen::VectorXd x;
    double objective;    // w.x
    std::size_t pivots;  // pivots spent in this call
  };

  /// Throws DomainError when the cuts exclude the whole box.
  Solution solve();

 private:
  void refactor();
  void pivot(Eigen::Index row, Eigen::Index col);
  Eigen::VectorXd original_column(Eigen::Index col) const;
  double column_cost(Eigen::Index col) const;

  Eigen::VectorXd w_, u_;
  std::vector<Eigen::VectorXd> cuts_;
  std::vector<double> rhs_;

  // Columns: [0, n) slacks, [n, 2n) upper-bound multipliers z, then one per cut.
  Eigen::MatrixXd tableau_;   // B^{-1} [I, -I, C^T]
  Eigen::VectorXd values_;    // B^{-1} w, the basic variable values
  Eigen::VectorXd reduced_;   // c_j - c_B B^{-1} a_j
  std::vector<Eigen::Index> basis_;
  std::size_t pivots_since_refactor_ = 0;
};

}  // namespace epivax
