#include "doctest.h"

#include <random>

#include "zsm/linprog.hpp"

using namespace zsm::lp;

TEST_CASE("box-only maximisation picks the bound matching the objective sign") {
  Problem p{Eigen::MatrixXd(0, 3), Eigen::VectorXd(0), -Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(3)};
  Simplex s(p);
  REQUIRE(s.feasible());
  CHECK(s.maximize(Eigen::Vector3d(1, -2, 0.5)) == Status::optimal);
  CHECK(s.objective_value() == doctest::Approx(3.5));
}

TEST_CASE("equality constrained") {
  // max x + y st x + y + z = 1, box [-1, 1]
  Problem p{Eigen::MatrixXd::Ones(1, 3), Eigen::VectorXd::Ones(1), -Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(3)};
  Simplex s(p);
  REQUIRE(s.feasible());
  s.maximize(Eigen::Vector3d(1, 1, 0));
  CHECK(s.objective_value() == doctest::Approx(2.0));
  CHECK(s.solution().sum() == doctest::Approx(1.0));
  s.maximize(Eigen::Vector3d(-1, 0, 0));
  CHECK(s.objective_value() == doctest::Approx(1.0));
}

TEST_CASE("infeasible") {
  Problem p{Eigen::MatrixXd::Ones(1, 2), Eigen::VectorXd::Constant(1, 3.0), -Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2)};
  CHECK_FALSE(is_feasible(p));
}

TEST_CASE("random problems agree with vertex brute force") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int t = 0; t < 40; ++t) {
    // 1 equality, 3 variables: optimum sits on an edge of the cube; scan edges.
    Eigen::RowVector3d a(g(rng), g(rng), g(rng));
    const double rhs = a.dot(Eigen::Vector3d(0.3 * g(rng), 0.3 * g(rng), 0.3 * g(rng)).cwiseMax(-0.9).cwiseMin(0.9));
    Eigen::Vector3d c(g(rng), g(rng), g(rng));
    Problem p{a, Eigen::VectorXd::Constant(1, rhs), -Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(3)};
    Simplex s(p);
    REQUIRE(s.feasible());
    s.maximize(c);
    double best = -1e300;
    for (int free = 0; free < 3; ++free) {
      for (int mask = 0; mask < 4; ++mask) {
        Eigen::Vector3d x;
        int k = 0;
        for (int i = 0; i < 3; ++i) {
          if (i == free) continue;
          x(i) = (mask >> k++) & 1 ? 1.0 : -1.0;
        }
        if (std::abs(a(free)) < 1e-12) continue;
        x(free) = 0.0;
        x(free) = (rhs - a.dot(x)) / a(free);
        if (std::abs(x(free)) <= 1 + 1e-12) best = std::max(best, c.dot(x));
      }
    }
    CHECK(s.objective_value() == doctest::Approx(best).epsilon(1e-9));
  }
}
