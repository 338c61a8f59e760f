#pragma once

#include <Eigen/Dense>

namespace pnpc::ctrl {

// Stabilizing solution of the discrete algebraic Riccati equation
// P = A'PA - A'PB (R + B'PB)^-1 B'PA + Q via the structure-preserving
// doubling iteration. Throws on non-convergence.
Eigen::MatrixXd solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

struct LqrResult {
  Eigen::MatrixXd K;  // u = -K x stabilizes; we store the convention u = K x
  Eigen::MatrixXd P;
};

// Infinite-horizon discrete LQR; returned K uses the u = K x convention,
// i.e. A + B K is Schur stable.
LqrResult lqr(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
              const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

double spectral_radius(const Eigen::MatrixXd& A);

// PBH test: every eigenvalue of A with |lambda| >= 1 is controllable.
bool is_stabilizable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace pnpc::ctrl
