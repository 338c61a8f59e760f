#pragma once

#include <Eigen/Dense>

namespace pnpc::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpResult {
  LpStatus status = LpStatus::IterLimit;
  double value = 0.0;
  Eigen::VectorXd x;
};

// Maximize c'x subject to A x <= b, x free.
// Dense two-phase simplex with Bland's rule; intended for the small
// polytope queries used throughout (n <= ~10, a few dozen rows).
LpResult maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                  const Eigen::VectorXd& b, int max_iter = 20000);

// Returns a feasible point of {x : A x <= b} if one exists.
LpResult feasible_point(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace pnpc::lp
