#pragma once

#include <Eigen/Dense>

namespace pnpc::qp {

enum class QpStatus { Optimal, Infeasible, IterLimit };

struct QpResult {
  QpStatus status = QpStatus::IterLimit;
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;  // multipliers per constraint row (>= 0)
  double cost = 0.0;
  int iterations = 0;
};

// Minimize 1/2 x'G x + g'x subject to A x <= b, with G positive definite.
// Dual active-set method (Goldfarb-Idnani): starts from the unconstrained
// minimizer and adds violated constraints; infeasibility surfaces as an
// unbounded dual ray. Constraint selection is most-violated with
// lowest-index tie-breaking, so solves are deterministic.
class DenseQpSolver {
 public:
  DenseQpSolver(Eigen::MatrixXd G, Eigen::MatrixXd A);

  // Solve for the given linear term and right-hand side; the quadratic
  // term and constraint normals are fixed at construction.
  QpResult solve(const Eigen::VectorXd& g, const Eigen::VectorXd& b,
                 int max_iter = 0) const;

  // max(||Gx + g + A'lambda||_inf, complementarity, primal violation).
  double kkt_residual(const Eigen::VectorXd& g, const Eigen::VectorXd& b,
                      const QpResult& r) const;

  int num_vars() const { return static_cast<int>(G_.rows()); }
  int num_constraints() const { return static_cast<int>(A_.rows()); }

 private:
  Eigen::MatrixXd G_;
  Eigen::MatrixXd A_;
  Eigen::LLT<Eigen::MatrixXd> G_llt_;
};

}  // namespace pnpc::qp
