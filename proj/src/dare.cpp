#include "pnpc/dare.hpp"

#include <stdexcept>

namespace pnpc::ctrl {

Eigen::MatrixXd solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q,
                           const Eigen::MatrixXd& R) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != B.cols() || R.cols() != B.cols())
    throw std::invalid_argument("solve_dare: dimension mismatch");

  Eigen::LLT<Eigen::MatrixXd> R_llt(R);
  if (R_llt.info() != Eigen::Success)
    throw std::invalid_argument("solve_dare: R not positive definite");

  Eigen::MatrixXd A_k = A;
  Eigen::MatrixXd G_k = B * R_llt.solve(B.transpose());
  Eigen::MatrixXd H_k;
  Eigen::MatrixXd H_k1 = Q;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

  for (int iter = 0; iter < 200; ++iter) {
    H_k = H_k1;
    Eigen::MatrixXd W = I + G_k * H_k;
    auto W_lu = W.lu();
    Eigen::MatrixXd V1 = W_lu.solve(A_k);
    Eigen::MatrixXd V2 = W_lu.solve(G_k.transpose()).transpose();
    G_k += A_k * V2 * A_k.transpose();
    H_k1 = H_k + V1.transpose() * H_k * A_k;
    A_k *= V1;
    if ((H_k1 - H_k).norm() <= 1e-12 * std::max(1.0, H_k1.norm()))
      return H_k1;
  }
  throw std::runtime_error("solve_dare: doubling iteration did not converge");
}

LqrResult lqr(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
              const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
  LqrResult out;
  out.P = solve_dare(A, B, Q, R);
  Eigen::MatrixXd S = R + B.transpose() * out.P * B;
  out.K = -S.ldlt().solve(B.transpose() * out.P * A);
  return out;
}

double spectral_radius(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stabilizable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(A.rows());
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  for (int i = 0; i < n; ++i) {
    const std::complex<double> lam = es.eigenvalues()(i);
    if (std::abs(lam) < 1.0 - 1e-9) continue;
    Eigen::MatrixXcd M(n, n + B.cols());
    M << (A.cast<std::complex<double>>() -
          lam * Eigen::MatrixXcd::Identity(n, n)),
        B.cast<std::complex<double>>();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    if (svd.rank() < n) return false;
  }
  return true;
}

}  // namespace pnpc::ctrl
