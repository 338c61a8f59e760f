#include "pnpc/mpcx.hpp"

namespace pnpc::mpc {

MpcProblem::MpcProblem(const model::SubsystemModel& m,
                       design::TubeController ctrl)
    : ctrl_(std::move(ctrl)), A_(m.A), B_(m.B) {
  nx_ = m.nx();
  nu_ = m.nu();
  const int N = ctrl_.N;
  nz_ = nx_ + N * nu_;
  xs_ = VectorXd::Zero(nx_);
  us_ = VectorXd::Zero(nu_);

  // Prediction matrices: xhat_k = Sx_k xhat0 + Su_k (v_0..v_{N-1}).
  std::vector<MatrixXd> Sx(static_cast<size_t>(N + 1));
  std::vector<MatrixXd> Su(static_cast<size_t>(N + 1));
  Sx[0] = MatrixXd::Identity(nx_, nx_);
  Su[0] = MatrixXd::Zero(nx_, N * nu_);
  for (int k = 1; k <= N; ++k) {
    Sx[static_cast<size_t>(k)] = A_ * Sx[static_cast<size_t>(k - 1)];
    Su[static_cast<size_t>(k)] = A_ * Su[static_cast<size_t>(k - 1)];
    Su[static_cast<size_t>(k)].block(0, (k - 1) * nu_, nx_, nu_) = B_;
  }

  hessian_ = MatrixXd::Zero(nz_, nz_);
  for (int k = 0; k <= N; ++k) {
    MatrixXd Mk(nx_, nz_);
    Mk << Sx[static_cast<size_t>(k)], Su[static_cast<size_t>(k)];
    const MatrixXd& Wk = (k == N) ? ctrl_.P : ctrl_.Q;
    hessian_ += Mk.transpose() * Wk * Mk;
  }
  for (int k = 0; k < N; ++k)
    hessian_.block(nx_ + k * nu_, nx_ + k * nu_, nu_, nu_) += ctrl_.R;

  // Constraint rows. The tube constraint couples the rhs to the measured
  // state; everything else is constant.
  const auto& Z = ctrl_.Z;
  const auto& Xh = ctrl_.Xhat;
  const auto& V = ctrl_.V;
  const auto& Xf = ctrl_.Xf;
  const int rZ = static_cast<int>(Z.normals().rows());
  const int rX = static_cast<int>(Xh.normals().rows());
  const int rV = static_cast<int>(V.normals().rows());
  const int rF = static_cast<int>(Xf.normals().rows());
  const int rows = rZ + N * rX + N * rV + rF;

  Acon_ = MatrixXd::Zero(rows, nz_);
  bcon_const_ = VectorXd::Zero(rows);
  bcon_x_ = MatrixXd::Zero(rows, nx_);
  int r = 0;
  // x - xhat0 in Z  =>  -Nz xhat0 <= cz - Nz xi
  Acon_.block(r, 0, rZ, nx_) = -Z.normals();
  bcon_const_.segment(r, rZ) = Z.offsets();
  bcon_x_.block(r, 0, rZ, nx_) = -Z.normals();
  r += rZ;
  for (int k = 0; k < N; ++k) {
    MatrixXd Mk(nx_, nz_);
    Mk << Sx[static_cast<size_t>(k)], Su[static_cast<size_t>(k)];
    Acon_.block(r, 0, rX, nz_) = Xh.normals() * Mk;
    bcon_const_.segment(r, rX) = Xh.offsets();
    r += rX;
  }
  for (int k = 0; k < N; ++k) {
    Acon_.block(r, nx_ + k * nu_, rV, nu_) = V.normals();
    bcon_const_.segment(r, rV) = V.offsets();
    r += rV;
  }
  MatrixXd MN(nx_, nz_);
  MN << Sx[static_cast<size_t>(N)], Su[static_cast<size_t>(N)];
  Acon_.block(r, 0, rF, nz_) = Xf.normals() * MN;
  bcon_const_.segment(r, rF) = Xf.offsets();

  solver_ = std::make_unique<qp::DenseQpSolver>(2.0 * hessian_, Acon_);
}

void MpcProblem::set_setpoint(const VectorXd& xs, const VectorXd& us) {
  if (xs.size() != nx_ || us.size() != nu_)
    throw std::invalid_argument("set_setpoint: size mismatch");
  xs_ = xs;
  us_ = us;
}

MpcSolution MpcProblem::solve(const VectorXd& x) const {
  MpcSolution out;
  if (!x.allFinite()) throw std::invalid_argument("solve: non-finite state");
  const VectorXd xi = x - xs_;
  const VectorXd b = bcon_const_ + bcon_x_ * xi;
  auto r = solver_->solve(VectorXd::Zero(nz_), b);
  out.iterations = r.iterations;
  if (r.status == qp::QpStatus::Infeasible) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  if (r.status != qp::QpStatus::Optimal) {
    out.status = SolveStatus::Error;
    return out;
  }
  out.kkt = solver_->kkt_residual(VectorXd::Zero(nz_), b, r);
  if (out.kkt > 1e-7) {
    out.status = SolveStatus::Error;
    return out;
  }
  out.status = SolveStatus::Optimal;
  out.xhat0 = xs_ + r.x.head(nx_);
  out.v_seq.resize(static_cast<size_t>(ctrl_.N));
  for (int k = 0; k < ctrl_.N; ++k)
    out.v_seq[static_cast<size_t>(k)] = r.x.segment(nx_ + k * nu_, nu_);
  out.cost = r.x.dot(hessian_ * r.x);
  return out;
}

bool MpcProblem::feasible_region_probe(const VectorXd& x) const {
  return solve(x).status == SolveStatus::Optimal;
}

VectorXd MpcProblem::control_law(const model::SubsystemModel& m,
                                 const VectorXd& x, const VectorXd& psi,
                                 const MpcSolution& sol) const {
  if (sol.status != SolveStatus::Optimal)
    throw std::logic_error("control_law: solution not optimal");
  const double g = m.g(x, psi);
  if (std::abs(g) < 1e-9)
    throw InvertibilityFault("control_law: gain g vanished");
  const VectorXd h = m.h(x, psi);
  const VectorXd u =
      (us_ + sol.v_seq.front() + ctrl_.K * (x - sol.xhat0) - h) / g;
  if (m.U.point_margin(u) > geom::kSetTol)
    throw CertificateViolation("control_law: input left U");
  return u;
}

VectorXd MpcProblem::nominal_next(const MpcSolution& sol) const {
  return xs_ + A_ * (sol.xhat0 - xs_) + B_ * sol.v_seq.front();
}

}  // namespace pnpc::mpc
