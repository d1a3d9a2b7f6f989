#include "zsm/linprog.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace zsm::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kRatioTieTol = 1e-12;
constexpr int kDegenerateStreakForBland = 50;

}  // namespace

Simplex::Simplex(const Problem& problem, Options options) : options_(options) {
  num_vars_ = problem.lower.size();
  if (problem.upper.size() != num_vars_ || (problem.eq.rows() > 0 && problem.eq.cols() != num_vars_) ||
      problem.eq.rows() != problem.rhs.size()) {
    throw std::invalid_argument("lp: inconsistent problem dimensions");
  }
  if (!problem.lower.allFinite() || !problem.upper.allFinite()) {
    throw std::invalid_argument("lp: bounds must be finite");
  }
  if ((problem.upper.array() < problem.lower.array()).any()) {
    feasible_ = false;
    infeasibility_ = std::numeric_limits<double>::infinity();
    return;
  }

  // Drop all-zero rows (checking their right-hand side) and scale the rest to unit max.
  std::vector<Eigen::Index> kept;
  double dropped_residual = 0.0;
  for (Eigen::Index i = 0; i < problem.eq.rows(); ++i) {
    const double s = problem.eq.row(i).cwiseAbs().maxCoeff();
    if (s == 0.0) {
      dropped_residual += std::abs(problem.rhs(i));
    } else {
      kept.push_back(i);
    }
  }
  num_rows_ = static_cast<Eigen::Index>(kept.size());
  const Eigen::Index p = num_rows_, n = num_vars_;

  scaled_ = Eigen::MatrixXd::Zero(p, n + p);
  scaled_rhs_.resize(p);
  row_weight_.resize(p);
  for (Eigen::Index r = 0; r < p; ++r) {
    const auto i = kept[static_cast<std::size_t>(r)];
    const double s = problem.eq.row(i).cwiseAbs().maxCoeff();
    scaled_.row(r).head(n) = problem.eq.row(i) / s;
    scaled_rhs_(r) = problem.rhs(i) / s;
    row_weight_(r) = s;
  }

  lower_.resize(n + p);
  upper_.resize(n + p);
  lower_.head(n) = problem.lower;
  upper_.head(n) = problem.upper;
  lower_.tail(p).setZero();
  upper_.tail(p).setConstant(std::numeric_limits<double>::infinity());

  x_ = Eigen::VectorXd::Zero(n + p);
  x_.head(n) = problem.lower;
  const Eigen::VectorXd residual = scaled_rhs_ - scaled_.leftCols(n) * x_.head(n);
  for (Eigen::Index r = 0; r < p; ++r) {
    scaled_(r, n + r) = residual(r) >= 0.0 ? 1.0 : -1.0;
    x_(n + r) = std::abs(residual(r));
  }

  basis_.resize(static_cast<std::size_t>(p));
  is_basic_.assign(static_cast<std::size_t>(n + p), false);
  for (Eigen::Index r = 0; r < p; ++r) {
    basis_[static_cast<std::size_t>(r)] = n + r;
    is_basic_[static_cast<std::size_t>(n + r)] = true;
  }
  // B = diag(sign), so B^-1 * scaled multiplies each row by its sign.
  tableau_ = scaled_;
  for (Eigen::Index r = 0; r < p; ++r) tableau_.row(r) *= scaled_(r, n + r);

  if (p > 0) {
    const double wmax = row_weight_.maxCoeff();
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + p);
    cost.tail(p) = -row_weight_ / wmax;
    if (!iterate(cost)) throw std::runtime_error("lp: phase I iteration limit reached");
  }

  infeasibility_ = dropped_residual;
  for (Eigen::Index r = 0; r < p; ++r) infeasibility_ += std::abs(x_(n + r)) * row_weight_(r);
  feasible_ = infeasibility_ <= options_.feasibility_tol;
  if (!feasible_) return;

  // Pivot remaining artificials out of the basis; rows where that is
  // impossible are redundant and keep a fixed-at-zero artificial.
  for (Eigen::Index r = 0; r < p; ++r) {
    const auto var = basis_[static_cast<std::size_t>(r)];
    if (var < n) continue;
    Eigen::Index best = -1;
    double best_abs = 1e-9;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (is_basic_[static_cast<std::size_t>(j)]) continue;
      const double a = std::abs(tableau_(r, j));
      if (a > best_abs) {
        best_abs = a;
        best = j;
      }
    }
    if (best >= 0) {
      x_(var) = 0.0;
      pivot(r, best);
    }
  }
  for (Eigen::Index r = 0; r < p; ++r) {
    upper_(n + r) = 0.0;
    if (!is_basic_[static_cast<std::size_t>(n + r)]) x_(n + r) = 0.0;
  }
  refine();
}

void Simplex::pivot(Eigen::Index row, Eigen::Index col) {
  const double pv = tableau_(row, col);
  tableau_.row(row) /= pv;
  const Eigen::RowVectorXd pivot_row = tableau_.row(row);
  Eigen::VectorXd factors = tableau_.col(col);
  factors(row) = 0.0;
  tableau_.noalias() -= factors * pivot_row;
  tableau_(row, col) = 1.0;
  for (Eigen::Index i = 0; i < tableau_.rows(); ++i) {
    if (i != row) tableau_(i, col) = 0.0;
  }
  const auto leaving = basis_[static_cast<std::size_t>(row)];
  is_basic_[static_cast<std::size_t>(leaving)] = false;
  is_basic_[static_cast<std::size_t>(col)] = true;
  basis_[static_cast<std::size_t>(row)] = col;
}

bool Simplex::iterate(const Eigen::VectorXd& cost) {
  const Eigen::Index p = num_rows_, total = num_vars_ + num_rows_;
  const int limit = options_.max_iterations > 0 ? options_.max_iterations : static_cast<int>(200 * total + 1000);
  const double opt_tol = 1e-10 * std::max(1.0, cost.cwiseAbs().maxCoeff());
  int degenerate_streak = 0;
  bool bland = false;

  Eigen::VectorXd basic_cost(p);
  for (int iter = 0; iter < limit; ++iter) {
    for (Eigen::Index r = 0; r < p; ++r) basic_cost(r) = cost(basis_[static_cast<std::size_t>(r)]);
    Eigen::RowVectorXd reduced = cost.transpose();
    if (p > 0) reduced.noalias() -= basic_cost.transpose() * tableau_;

    Eigen::Index enter = -1;
    int dir = 0;
    double best_gain = 0.0;
    for (Eigen::Index j = 0; j < total; ++j) {
      if (is_basic_[static_cast<std::size_t>(j)]) continue;
      if (upper_(j) - lower_(j) <= 0.0) continue;
      const bool at_lower = std::abs(x_(j) - lower_(j)) <= std::abs(x_(j) - upper_(j));
      double gain = 0.0;
      int d = 0;
      if (at_lower && reduced(j) > opt_tol) {
        gain = reduced(j);
        d = 1;
      } else if (!at_lower && reduced(j) < -opt_tol) {
        gain = -reduced(j);
        d = -1;
      }
      if (d == 0) continue;
      if (bland) {
        enter = j;
        dir = d;
        break;
      }
      if (gain > best_gain) {
        best_gain = gain;
        enter = j;
        dir = d;
      }
    }
    if (enter < 0) return true;

    double theta = upper_(enter) - lower_(enter);
    Eigen::Index leave = -1;
    double leave_abs = 0.0;
    for (Eigen::Index r = 0; r < p; ++r) {
      const double t = tableau_(r, enter) * dir;
      if (std::abs(t) <= kPivotTol) continue;
      const auto var = basis_[static_cast<std::size_t>(r)];
      double lim;
      if (t > 0.0) {
        lim = std::max(0.0, x_(var) - lower_(var)) / t;
      } else {
        if (!std::isfinite(upper_(var))) continue;
        lim = std::max(0.0, upper_(var) - x_(var)) / (-t);
      }
      const bool better = lim < theta - kRatioTieTol ||
                          (lim <= theta + kRatioTieTol && leave >= 0 &&
                           (bland ? var < basis_[static_cast<std::size_t>(leave)] : std::abs(t) > leave_abs));
      if (better || (leave < 0 && lim <= theta)) {
        theta = std::min(theta, lim);
        leave = r;
        leave_abs = std::abs(t);
      }
    }
    if (!std::isfinite(theta)) throw std::runtime_error("lp: unbounded direction in bounded problem");

    x_(enter) += dir * theta;
    for (Eigen::Index r = 0; r < p; ++r) {
      x_(basis_[static_cast<std::size_t>(r)]) -= tableau_(r, enter) * dir * theta;
    }

    if (leave < 0) {
      x_(enter) = dir > 0 ? upper_(enter) : lower_(enter);
    } else {
      const auto var = basis_[static_cast<std::size_t>(leave)];
      const double t = tableau_(leave, enter) * dir;
      x_(var) = t > 0.0 ? lower_(var) : upper_(var);
      pivot(leave, enter);
      if (var >= num_vars_) upper_(var) = 0.0;  // artificials never re-enter
    }

    if (theta < 1e-12) {
      if (++degenerate_streak > kDegenerateStreakForBland) bland = true;
    } else {
      degenerate_streak = 0;
      bland = false;
    }
  }
  return false;
}

void Simplex::refine() {
  const Eigen::Index p = num_rows_;
  if (p == 0) return;
  Eigen::MatrixXd basis_matrix(p, p);
  Eigen::VectorXd rhs = scaled_rhs_;
  for (Eigen::Index r = 0; r < p; ++r) basis_matrix.col(r) = scaled_.col(basis_[static_cast<std::size_t>(r)]);
  for (Eigen::Index j = 0; j < scaled_.cols(); ++j) {
    if (!is_basic_[static_cast<std::size_t>(j)] && x_(j) != 0.0) rhs -= scaled_.col(j) * x_(j);
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
  const Eigen::VectorXd xb = lu.solve(rhs);
  if (!xb.allFinite()) return;
  for (Eigen::Index r = 0; r < p; ++r) x_(basis_[static_cast<std::size_t>(r)]) = xb(r);
  tableau_ = lu.solve(scaled_);
}

Status Simplex::maximize(const Eigen::VectorXd& objective) {
  if (!feasible_) return Status::infeasible;
  if (objective.size() != num_vars_) throw std::invalid_argument("lp: objective length mismatch");
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(num_vars_ + num_rows_);
  cost.head(num_vars_) = objective;
  if (!iterate(cost)) throw std::runtime_error("lp: phase II iteration limit reached");
  refine();
  objective_value_ = objective.dot(x_.head(num_vars_));
  return Status::optimal;
}

bool is_feasible(const Problem& problem, Options options) { return Simplex(problem, options).feasible(); }

}  // namespace zsm::lp
