#include "pnpc/lp.hpp"

#include <vector>

namespace pnpc::lp {
namespace {

constexpr double kTol = 1e-9;

struct Tableau {
  Eigen::MatrixXd T;        // m x ncols, current basis inverse applied
  Eigen::VectorXd rhs;      // m, kept >= 0
  std::vector<int> basis;   // basis variable per row
  int ncols = 0;

  void pivot(int r, int c) {
    const double p = T(r, c);
    T.row(r) /= p;
    rhs(r) /= p;
    for (int i = 0; i < T.rows(); ++i) {
      if (i == r) continue;
      const double f = T(i, c);
      if (f == 0.0) continue;
      T.row(i) -= f * T.row(r);
      rhs(i) -= f * rhs(r);
    }
    basis[static_cast<size_t>(r)] = c;
  }
};

// Runs the simplex loop maximizing obj over the tableau. `allowed` masks
// columns permitted to enter the basis. Bland's rule throughout: smallest
// eligible entering index, smallest basis index on ratio ties.
LpStatus run_simplex(Tableau& tb, const Eigen::VectorXd& obj,
                     const std::vector<bool>& allowed, int max_iter) {
  const int m = static_cast<int>(tb.T.rows());
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::VectorXd zrow = Eigen::VectorXd::Zero(tb.ncols);
    for (int i = 0; i < m; ++i) zrow += obj(tb.basis[static_cast<size_t>(i)]) * tb.T.row(i).transpose();

    int enter = -1;
    for (int j = 0; j < tb.ncols; ++j) {
      if (!allowed[static_cast<size_t>(j)]) continue;
      if (obj(j) - zrow(j) > kTol) { enter = j; break; }
    }
    if (enter < 0) return LpStatus::Optimal;

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (tb.T(i, enter) > kTol) {
        const double ratio = tb.rhs(i) / tb.T(i, enter);
        if (leave < 0 || ratio < best_ratio - kTol ||
            (ratio < best_ratio + kTol && tb.basis[static_cast<size_t>(i)] < tb.basis[static_cast<size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return LpStatus::Unbounded;
    tb.pivot(leave, enter);
  }
  return LpStatus::IterLimit;
}

}  // namespace

LpResult maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                  const Eigen::VectorXd& b, int max_iter) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(A.rows());
  LpResult out;

  if (m == 0) {  // no constraints: only c = 0 is bounded
    out.status = c.isZero(0.0) ? LpStatus::Optimal : LpStatus::Unbounded;
    out.x = Eigen::VectorXd::Zero(n);
    return out;
  }

  // Standard form: vars z = [x+; x-; slack; artificial], M z = b', z >= 0.
  std::vector<int> art_rows;
  for (int i = 0; i < m; ++i)
    if (b(i) < 0.0) art_rows.push_back(i);
  const int n_art = static_cast<int>(art_rows.size());
  const int ncols = 2 * n + m + n_art;

  Tableau tb;
  tb.ncols = ncols;
  tb.T = Eigen::MatrixXd::Zero(m, ncols);
  tb.rhs = b;
  tb.basis.resize(static_cast<size_t>(m));

  tb.T.block(0, 0, m, n) = A;
  tb.T.block(0, n, m, n) = -A;
  for (int i = 0; i < m; ++i) tb.T(i, 2 * n + i) = 1.0;
  for (int k = 0; k < n_art; ++k) {
    const int i = art_rows[static_cast<size_t>(k)];
    tb.T.row(i) = -tb.T.row(i);
    tb.rhs(i) = -tb.rhs(i);
    tb.T(i, 2 * n + m + k) = 1.0;
  }
  for (int i = 0; i < m; ++i) tb.basis[static_cast<size_t>(i)] = 2 * n + i;
  for (int k = 0; k < n_art; ++k)
    tb.basis[static_cast<size_t>(art_rows[static_cast<size_t>(k)])] = 2 * n + m + k;

  std::vector<bool> allowed(static_cast<size_t>(ncols), true);

  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(ncols);
    for (int k = 0; k < n_art; ++k) phase1(2 * n + m + k) = -1.0;
    const LpStatus st = run_simplex(tb, phase1, allowed, max_iter);
    if (st == LpStatus::IterLimit) { out.status = st; return out; }
    double art_sum = 0.0;
    for (int i = 0; i < m; ++i)
      if (tb.basis[static_cast<size_t>(i)] >= 2 * n + m) art_sum += tb.rhs(i);
    if (art_sum > 1e-7) { out.status = LpStatus::Infeasible; return out; }

    // Drive remaining (zero-valued) artificials out of the basis.
    for (int i = 0; i < m; ++i) {
      if (tb.basis[static_cast<size_t>(i)] < 2 * n + m) continue;
      int c2 = -1;
      for (int j = 0; j < 2 * n + m; ++j)
        if (std::abs(tb.T(i, j)) > kTol) { c2 = j; break; }
      if (c2 >= 0) tb.pivot(i, c2);
      // else: redundant row, artificial stays basic at zero
    }
    for (int j = 2 * n + m; j < ncols; ++j) allowed[static_cast<size_t>(j)] = false;
  }

  Eigen::VectorXd obj = Eigen::VectorXd::Zero(ncols);
  obj.head(n) = c;
  obj.segment(n, n) = -c;
  out.status = run_simplex(tb, obj, allowed, max_iter);
  if (out.status != LpStatus::Optimal) return out;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(ncols);
  for (int i = 0; i < m; ++i) z(tb.basis[static_cast<size_t>(i)]) = tb.rhs(i);
  out.x = z.head(n) - z.segment(n, n);
  out.value = c.dot(out.x);
  return out;
}

LpResult feasible_point(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  return maximize(Eigen::VectorXd::Zero(A.cols()), A, b);
}

}  // namespace pnpc::lp
