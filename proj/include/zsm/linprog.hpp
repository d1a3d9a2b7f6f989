#ifndef ZSM_LINPROG_HPP
#define ZSM_LINPROG_HPP

#include <vector>

#include <Eigen/Dense>

namespace zsm::lp {

/// Equality-constrained LP over a box: eq * x = rhs, lower <= x <= upper.
/// All bounds must be finite.
struct Problem {
  Eigen::MatrixXd eq;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

enum class Status { optimal, infeasible };

struct Options {
  /// Accepted total equality residual, in the units of the rows as given.
  double feasibility_tol = 1e-9;
  int max_iterations = 0;  // 0: automatic
};

/**
 * Dense bounded-variable primal simplex.
 *
 * Construction runs phase I. Subsequent maximize() calls start from the
 * last basis, so repeated support queries over the same feasible set are
 * cheap.
 */
class Simplex {
 public:
  Simplex(const Problem& problem, Options options = {});

  bool feasible() const { return feasible_; }
  /// Residual left by phase I, in row units.
  double infeasibility() const { return infeasibility_; }

  /// Maximises objective . x. Requires feasible().
  Status maximize(const Eigen::VectorXd& objective);

  /// Structural variables at the current basic solution.
  Eigen::VectorXd solution() const { return x_.head(num_vars_); }
  double objective_value() const { return objective_value_; }

 private:
  void pivot(Eigen::Index row, Eigen::Index col);
  bool iterate(const Eigen::VectorXd& cost);
  void refine();

  Options options_;
  Eigen::Index num_vars_ = 0;
  Eigen::Index num_rows_ = 0;
  Eigen::MatrixXd scaled_;       // scaled equality rows with artificial columns appended
  Eigen::VectorXd scaled_rhs_;
  Eigen::VectorXd row_weight_;   // 1 / row scale
  Eigen::MatrixXd tableau_;      // B^-1 * scaled_
  Eigen::VectorXd x_;
  Eigen::VectorXd lower_, upper_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> is_basic_;
  bool feasible_ = false;
  double infeasibility_ = 0.0;
  double objective_value_ = 0.0;
};

/// Phase-I only convenience.
bool is_feasible(const Problem& problem, Options options = {});

}  // namespace zsm::lp

#endif  // ZSM_LINPROG_HPP
