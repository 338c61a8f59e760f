#include "pnpc/qp.hpp"

#include <stdexcept>
#include <vector>

namespace pnpc::qp {

namespace {
constexpr double kViolTol = 1e-9;
constexpr double kZeroTol = 1e-11;
}  // namespace

DenseQpSolver::DenseQpSolver(Eigen::MatrixXd G, Eigen::MatrixXd A)
    : G_(std::move(G)), A_(std::move(A)) {
  if (G_.rows() != G_.cols())
    throw std::invalid_argument("DenseQpSolver: G not square");
  if (A_.rows() > 0 && A_.cols() != G_.rows())
    throw std::invalid_argument("DenseQpSolver: A column mismatch");
  G_llt_.compute(G_);
  if (G_llt_.info() != Eigen::Success)
    throw std::invalid_argument("DenseQpSolver: G not positive definite");
}

QpResult DenseQpSolver::solve(const Eigen::VectorXd& g,
                              const Eigen::VectorXd& b, int max_iter) const {
  const int n = num_vars();
  const int m = num_constraints();
  if (max_iter <= 0) max_iter = 100 * (m + n) + 200;

  QpResult out;
  out.x = -G_llt_.solve(g);
  out.lambda = Eigen::VectorXd::Zero(m);

  std::vector<int> W;      // working set, rows of A_
  std::vector<double> lam; // multipliers of W

  auto rebuild = [&](Eigen::MatrixXd& Aw, Eigen::MatrixXd& GiAwT) {
    const int k = static_cast<int>(W.size());
    Aw.resize(k, n);
    for (int i = 0; i < k; ++i) Aw.row(i) = A_.row(W[static_cast<size_t>(i)]);
    GiAwT = G_llt_.solve(Aw.transpose());
  };

  int iters = 0;
  while (true) {
    if (++iters > max_iter) {
      out.status = QpStatus::IterLimit;
      out.iterations = iters;
      return out;
    }
    // Most violated constraint outside the working set.
    int p = -1;
    double worst = kViolTol;
    for (int i = 0; i < m; ++i) {
      bool in_w = false;
      for (int w : W)
        if (w == i) { in_w = true; break; }
      if (in_w) continue;
      const double v = A_.row(i).dot(out.x) - b(i);
      if (v > worst) { worst = v; p = i; }
    }
    if (p < 0) break;  // primal feasible => optimal

    const Eigen::VectorXd ap = A_.row(p).transpose();
    double mu = 0.0;

    while (true) {
      if (++iters > max_iter) {
        out.status = QpStatus::IterLimit;
        out.iterations = iters;
        return out;
      }
      Eigen::MatrixXd Aw, GiAwT;
      rebuild(Aw, GiAwT);
      const int k = static_cast<int>(W.size());

      Eigen::VectorXd Giap = G_llt_.solve(ap);
      Eigen::VectorXd r;          // dual step direction
      Eigen::VectorXd z = Giap;   // primal step direction H*ap
      if (k > 0) {
        Eigen::MatrixXd S = Aw * GiAwT;
        r = S.ldlt().solve(Aw * Giap);
        z = Giap - GiAwT * r;
      }

      const double zap = ap.dot(z);
      const double viol = ap.dot(out.x) - b(p);

      double t1 = std::numeric_limits<double>::infinity();
      int drop = -1;
      for (int i = 0; i < k; ++i) {
        if (k > 0 && r(i) > kZeroTol) {
          const double ratio = lam[static_cast<size_t>(i)] / r(i);
          if (ratio < t1 - kZeroTol ||
              (ratio < t1 + kZeroTol &&
               (drop < 0 || W[static_cast<size_t>(i)] < W[static_cast<size_t>(drop)]))) {
            t1 = ratio;
            drop = i;
          }
        }
      }
      const double t2 = zap > kZeroTol
                            ? viol / zap
                            : std::numeric_limits<double>::infinity();

      if (!std::isfinite(t1) && !std::isfinite(t2)) {
        out.status = QpStatus::Infeasible;  // dual unbounded
        out.iterations = iters;
        return out;
      }
      const double t = std::min(t1, t2);
      if (std::isfinite(t2)) out.x -= t * z;
      for (int i = 0; i < k; ++i) lam[static_cast<size_t>(i)] -= t * r(i);
      mu += t;

      if (t == t2 && std::isfinite(t2)) {
        W.push_back(p);
        lam.push_back(mu);
        break;
      }
      // Partial step: drop the blocking constraint and retry p.
      W.erase(W.begin() + drop);
      lam.erase(lam.begin() + drop);
    }
  }

  for (size_t i = 0; i < W.size(); ++i)
    out.lambda(W[i]) = lam[i];
  out.cost = 0.5 * out.x.dot(G_ * out.x) + g.dot(out.x);
  out.status = QpStatus::Optimal;
  out.iterations = iters;
  return out;
}

double DenseQpSolver::kkt_residual(const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& b,
                                   const QpResult& r) const {
  double res = (G_ * r.x + g + A_.transpose() * r.lambda).cwiseAbs().maxCoeff();
  if (num_constraints() > 0) {
    Eigen::VectorXd s = A_ * r.x - b;
    res = std::max(res, s.maxCoeff());                          // primal
    res = std::max(res, (r.lambda.array() * s.array()).abs().maxCoeff());
    res = std::max(res, -r.lambda.minCoeff());                  // dual sign
  }
  return res;
}

}  // namespace pnpc::qp
