#pragma once

#include <memory>
#include <vector>

#include "pnpc/netmodel.hpp"
#include "pnpc/qp.hpp"
#include "pnpc/setsynth.hpp"

namespace pnpc::mpc {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class SolveStatus { Optimal, Infeasible, Error };

struct MpcSolution {
  SolveStatus status = SolveStatus::Error;
  VectorXd xhat0;               // absolute coordinates
  std::vector<VectorXd> v_seq;  // deviation inputs v(0:N-1)
  double cost = 0.0;
  int iterations = 0;
  double kkt = 0.0;
};

// Thrown when the applied input would leave U; the tightening certificate
// rules this out, so reaching it indicates a broken design.
struct CertificateViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvertibilityFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Condensed tube-MPC quadratic program for one subsystem. Built once per
// design; per-solve work is a right-hand-side assembly plus the dense QP.
// Supports regulation about a shifted equilibrium (x_s, u_s): the design
// margins guarantee every admissible setpoint keeps constraints valid.
class MpcProblem {
 public:
  MpcProblem(const model::SubsystemModel& m, design::TubeController ctrl);

  void set_setpoint(const VectorXd& xs, const VectorXd& us);
  const VectorXd& xs() const { return xs_; }
  const VectorXd& us() const { return us_; }

  MpcSolution solve(const VectorXd& x) const;
  bool feasible_region_probe(const VectorXd& x) const;

  // u = g^-1 [ u_s + v(0|t) + K (x - xhat(0|t)) - h(x, psi) ]; certifies
  // u in U and throws on violation or vanishing gain.
  VectorXd control_law(const model::SubsystemModel& m, const VectorXd& x,
                       const VectorXd& psi, const MpcSolution& sol) const;

  // Nominal successor xhat(1|t) of the solved problem, absolute coords.
  VectorXd nominal_next(const MpcSolution& sol) const;

  const design::TubeController& controller() const { return ctrl_; }
  int horizon() const { return ctrl_.N; }

 private:
  design::TubeController ctrl_;
  MatrixXd A_, B_;
  int nx_ = 0, nu_ = 0, nz_ = 0;
  VectorXd xs_, us_;
  MatrixXd Acon_;       // constraint normals over z = (xhat0, v_0.., v_N-1)
  VectorXd bcon_const_; // constant part of the rhs
  MatrixXd bcon_x_;     // rhs contribution of the measured state deviation
  std::unique_ptr<qp::DenseQpSolver> solver_;
  MatrixXd hessian_;
};

}  // namespace pnpc::mpc
