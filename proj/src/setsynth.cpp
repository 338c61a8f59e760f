#include "pnpc/setsynth.hpp"

#include <cmath>

#include "pnpc/dare.hpp"
#include "pnpc/lp.hpp"

namespace pnpc::design {

using geom::HPolytope;

std::string to_string(FailedStep s) {
  switch (s) {
    case FailedStep::None: return "none";
    case FailedStep::StepIII_Inclusion: return "step III inclusion";
    case FailedStep::StepIV_Feasibility: return "step IV feasibility";
    case FailedStep::TightenedEmpty: return "tightened-set emptiness";
    case FailedStep::Numerical: return "numerical";
  }
  return "unknown";
}

namespace {

uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_draw(uint64_t seed, uint64_t k) {  // in [-1, 1]
  const uint64_t h = mix64(seed ^ mix64(k + 1));
  return 2.0 * (static_cast<double>(h >> 11) / 9007199254740992.0) - 1.0;
}

// Componentwise box hull of a set of vectors, inflated about its center.
HPolytope box_hull(const std::vector<VectorXd>& pts, double inflation) {
  const int n = static_cast<int>(pts.front().size());
  VectorXd hi = pts.front(), lo = pts.front();
  for (const auto& p : pts) {
    hi = hi.cwiseMax(p);
    lo = lo.cwiseMin(p);
  }
  VectorXd c = 0.5 * (hi + lo);
  VectorXd hw = 0.5 * (hi - lo) * (1.0 + inflation);
  return HPolytope::box(c, hw);
}

VectorXd box_halfwidths(const HPolytope& box) {
  VectorXd hw(box.dim());
  for (int i = 0; i < box.dim(); ++i) {
    VectorXd d = VectorXd::Zero(box.dim());
    d(i) = 1.0;
    const double hi = geom::support(box, d).value;
    const double lo = -geom::support(box, (-d).eval()).value;
    hw(i) = 0.5 * (hi - lo);
  }
  return hw;
}

VectorXd box_center(const HPolytope& box) {
  VectorXd c(box.dim());
  for (int i = 0; i < box.dim(); ++i) {
    VectorXd d = VectorXd::Zero(box.dim());
    d(i) = 1.0;
    const double hi = geom::support(box, d).value;
    const double lo = -geom::support(box, (-d).eval()).value;
    c(i) = 0.5 * (hi + lo);
  }
  return c;
}

}  // namespace

HPolytope coupling_set(const model::SubsystemModel& m,
                       const std::map<int, geom::HPolytope>& parent_sets,
                       int grid_per_dim, double inflation) {
  const int n = m.nx();
  const int p = m.npsi();
  if (p == 0 || !m.w)
    return HPolytope::singleton(VectorXd::Zero(n));

  // Per-dimension range: parents present in the map contribute their set,
  // parents absent (unplugged) contribute the fixed value 0.
  std::vector<double> lo(static_cast<size_t>(p), 0.0);
  std::vector<double> hi(static_cast<size_t>(p), 0.0);
  for (int k = 0; k < p; ++k) {
    const auto& e = m.psi_layout[static_cast<size_t>(k)];
    auto it = parent_sets.find(e.parent);
    if (it == parent_sets.end()) continue;
    VectorXd d = VectorXd::Zero(it->second.dim());
    d(e.component) = 1.0;
    hi[static_cast<size_t>(k)] = geom::support(it->second, d).value;
    lo[static_cast<size_t>(k)] = -geom::support(it->second, (-d).eval()).value;
  }

  int g = std::max(2, grid_per_dim);
  while (std::pow(static_cast<double>(g), p) > 250000.0 && g > 2) --g;

  std::vector<VectorXd> vals;
  const long total = static_cast<long>(std::llround(std::pow(g, p)));
  VectorXd psi(p);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (int k = 0; k < p; ++k) {
      const int step = static_cast<int>(rem % g);
      rem /= g;
      const double t = static_cast<double>(step) / static_cast<double>(g - 1);
      psi(k) = lo[static_cast<size_t>(k)] +
               t * (hi[static_cast<size_t>(k)] - lo[static_cast<size_t>(k)]);
    }
    vals.push_back(m.w(psi));
  }
  return box_hull(vals, inflation);
}

MatchedBounds estimate_matched_bounds(const model::SubsystemModel& m,
                                      const geom::HPolytope& psi_set,
                                      int n_samples, double inflation) {
  MatchedBounds out;
  if (m.exact_g_range && m.exact_h_halfwidth) {
    out.g_range = *m.exact_g_range;
    out.h_halfwidth = *m.exact_h_halfwidth;
    if (out.g_range.lo <= 0.0 && out.g_range.hi >= 0.0)
      throw std::runtime_error("matched bounds: g range crosses zero");
    return out;
  }

  const int n = m.nx();
  const int p = m.npsi();
  const VectorXd xc = box_center(m.X), xh = box_halfwidths(m.X);
  VectorXd pc = VectorXd::Zero(p), ph = VectorXd::Zero(p);
  if (p > 0) {
    pc = box_center(psi_set);
    ph = box_halfwidths(psi_set);
  }

  double g_lo = std::numeric_limits<double>::infinity();
  double g_hi = -g_lo;
  VectorXd h_abs = VectorXd::Zero(m.nu());
  uint64_t ctr = 0;
  for (int s = 0; s < n_samples; ++s) {
    VectorXd x(n), psi(p);
    for (int k = 0; k < n; ++k) x(k) = xc(k) + xh(k) * unit_draw(90210, ctr++);
    for (int k = 0; k < p; ++k)
      psi(k) = pc(k) + ph(k) * unit_draw(90210, ctr++);
    const double gv = m.g(x, psi);
    if (std::abs(gv) < 1e-9)
      throw std::runtime_error("matched bounds: g vanishes on a sample");
    g_lo = std::min(g_lo, gv);
    g_hi = std::max(g_hi, gv);
    h_abs = h_abs.cwiseMax(m.h(x, psi).cwiseAbs());
  }
  if (g_lo <= 0.0 && g_hi >= 0.0)
    throw std::runtime_error("matched bounds: g changes sign");

  const double f = 1.0 + inflation;
  if (g_lo > 0.0) {
    out.g_range = {g_lo / f, g_hi * f};
  } else {
    out.g_range = {g_lo * f, g_hi / f};
  }
  out.h_halfwidth = h_abs * f;
  return out;
}

RpiResult rpi_tube(const MatrixXd& Ak, const HPolytope& W, double eps,
                   const std::vector<VectorXd>& extra_dirs) {
  RpiResult out;
  const int n = static_cast<int>(Ak.rows());

  // Symmetrize and floor the disturbance box so the contraction test is
  // well posed even for degenerate components.
  VectorXd hw = box_halfwidths(W) + box_center(W).cwiseAbs();
  const double scale = hw.maxCoeff();
  if (scale <= 1e-14) {
    out.Z = HPolytope::singleton(VectorXd::Zero(n));
    out.ok = true;
    out.terms = 0;
    return out;
  }
  hw = hw.cwiseMax(1e-6 * scale);
  const MatrixXd Gw = hw.asDiagonal();

  const double alpha_target = eps / (1.0 + eps);
  MatrixXd Apow = MatrixXd::Identity(n, n);
  std::vector<MatrixXd> blocks;
  double alpha = 1.0;
  int s = 0;
  for (s = 1; s <= 400; ++s) {
    blocks.push_back(Apow * Gw);
    Apow = Ak * Apow;
    // alpha(s) = min { a : Ak^s W' inside a W' } for the box W'
    alpha = 0.0;
    for (int i = 0; i < n; ++i) {
      double sup = 0.0;  // support of Ak^s W' along e_i
      for (int j = 0; j < n; ++j) sup += std::abs(Apow(i, j)) * hw(j);
      alpha = std::max(alpha, sup / hw(i));
    }
    if (alpha <= alpha_target) break;
  }
  if (alpha > alpha_target) {
    out.message = "mRPI contraction test failed (closed loop not contractive)";
    return out;
  }

  MatrixXd gens(n, static_cast<int>(blocks.size()) * n);
  for (size_t b = 0; b < blocks.size(); ++b)
    gens.block(0, static_cast<int>(b) * n, n, n) = blocks[b];
  gens /= (1.0 - alpha);
  HPolytope Zgen = HPolytope::zonotope(VectorXd::Zero(n), gens);

  // Pushes template offsets to a robust-invariant fixed point:
  // c_i <- max(c_i, h_P(Ak' n_i) + h_W(n_i)).
  auto fixed_point_offsets = [&](const MatrixXd& N, VectorXd& c) {
    const int rows = static_cast<int>(N.rows());
    for (int iter = 0; iter < 500; ++iter) {
      double grow = 0.0;
      VectorXd cn(rows);
      for (int i = 0; i < rows; ++i) {
        auto r = lp::maximize(Ak.transpose() * N.row(i).transpose(), N, c);
        if (r.status != lp::LpStatus::Optimal) return false;
        double wsup = 0.0;
        for (int j = 0; j < n; ++j) wsup += std::abs(N(i, j)) * hw(j);
        cn(i) = std::max(c(i), r.value + wsup);
        grow = std::max(grow, cn(i) - c(i));
      }
      c = cn;
      if (grow <= 1e-12 * std::max(1.0, c.maxCoeff())) return true;
    }
    return false;
  };

  HPolytope Zh;
  if (n <= 2) {
    Zh = Zgen;  // exact halfspace form already derived
  } else {
    // Template halfspace form, then push offsets to a robust invariant
    // fixed point. Template: axis directions propagated through Ak'.
    std::vector<VectorXd> dirs;
    auto add_dir = [&](VectorXd d) {
      const double nn = d.norm();
      if (nn < 1e-12) return;
      d /= nn;
      for (const auto& e : dirs)
        if ((e - d).norm() < 1e-9 || (e + d).norm() < 1e-9) return;
      dirs.push_back(d);
    };
    for (int i = 0; i < n; ++i) {
      VectorXd e = VectorXd::Zero(n);
      e(i) = 1.0;
      add_dir(e);
      add_dir(-e);
      for (int j = i + 1; j < n; ++j) {
        VectorXd f = e;
        f(j) = 1.0;
        add_dir(f);
        f(j) = -1.0;
        add_dir(f);
      }
    }
    for (const auto& d : extra_dirs) {
      add_dir(d);
      add_dir(-d);
    }
    const size_t base = dirs.size();
    MatrixXd AkT = Ak.transpose();
    for (size_t k = 0; k < base; ++k) {
      VectorXd d = dirs[k];
      for (int j = 0; j < 4; ++j) {
        d = AkT * d;
        add_dir(d);
      }
    }
    const int rows = static_cast<int>(dirs.size());
    MatrixXd N(rows, n);
    VectorXd c(rows);
    for (int i = 0; i < rows; ++i) {
      N.row(i) = dirs[static_cast<size_t>(i)].transpose();
      c(i) = geom::support(Zgen, dirs[static_cast<size_t>(i)]).value;
    }
    if (!fixed_point_offsets(N, c)) {
      out.message = "rpi template iteration failed";
      return out;
    }
    Zh = HPolytope::raw(N, c, false, VectorXd(), MatrixXd(), true, false);
  }

  // Certified invariance: h_Z(Ak' n) + h_W'(n) <= offset per facet. A
  // residual violation is repaired by scaling Z up: with a = h_Z(Ak'n),
  // w = h_W'(n) and offset c, the factor f = max w / (c - a) makes
  // f*a + w <= f*c hold exactly (W does not scale with Z).
  auto check = [&](const HPolytope& Z, double& f_needed) {
    double worst = 0.0;
    f_needed = 1.0;
    for (int i = 0; i < Z.normals().rows(); ++i) {
      const VectorXd nrow = Z.normals().row(i).transpose();
      const double a = geom::support(Z, (Ak.transpose() * nrow).eval()).value;
      double w = 0.0;
      for (int j = 0; j < n; ++j) w += std::abs(nrow(j)) * hw(j);
      const double c = Z.offsets()(i);
      worst = std::max(worst, (a + w) - c);
      if (a + w > c) {
        if (c - a <= 0.0) {
          f_needed = -1.0;  // not repairable by scaling
          return worst;
        }
        f_needed = std::max(f_needed, w / (c - a));
      }
    }
    return worst;
  };
  double f = 1.0;
  double viol = check(Zh, f);
  if (viol > 0.0) {
    if (f < 0.0) {
      out.message = "rpi certification failed (no contraction margin)";
      return out;
    }
    Zh = geom::scale(Zh, f * (1.0 + 1e-9));
    viol = check(Zh, f);
    if (viol > 1e-9) {
      out.message = "rpi certification failed after rescale";
      return out;
    }
  }
  out.Z = Zh;
  out.alpha = alpha;
  out.terms = s;
  out.ok = true;
  return out;
}

TightenResult tighten_constraints(const model::SubsystemModel& m,
                                  const HPolytope& Z, const HPolytope& Uz,
                                  const MatchedBounds& bounds,
                                  const DesignOptions& opts) {
  TightenResult out;
  HPolytope xh = geom::pontryagin_diff(m.X, Z);
  if (opts.state_margin.size() > 0) {
    xh = geom::pontryagin_diff(
        xh, HPolytope::box(VectorXd::Zero(m.nx()), opts.state_margin));
  }
  if (xh.is_empty() || !xh.origin_in_interior()) {
    out.message = "tightened state set empty";
    return out;
  }

  const int nu = m.nu();
  const double g_min_abs =
      std::min(std::abs(bounds.g_range.lo), std::abs(bounds.g_range.hi));
  VectorXd vbar(nu);
  for (int r = 0; r < nu; ++r) {
    VectorXd e = VectorXd::Zero(nu);
    e(r) = 1.0;
    const double ubar = std::min(geom::support(m.U, e).value,
                                 geom::support(m.U, (-e).eval()).value);
    const double uz = geom::support(Uz, e).value;
    vbar(r) = ubar * g_min_abs - bounds.h_halfwidth(r) - uz - opts.input_margin;
    if (vbar(r) <= 0.0) {
      out.message = "tightened input set empty on channel " + std::to_string(r);
      return out;
    }
  }
  out.Xhat = xh;
  out.V = HPolytope::box(VectorXd::Zero(nu), vbar);
  out.ok = true;
  return out;
}

TerminalResult terminal_set(const MatrixXd& Ak, const MatrixXd& K,
                            const HPolytope& Xhat, const HPolytope& V) {
  TerminalResult out;
  const int n = static_cast<int>(Ak.rows());
  const int nu = static_cast<int>(K.rows());

  // base constraints: x in Xhat and K x in V
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> offs;
  for (int i = 0; i < Xhat.normals().rows(); ++i) {
    rows.push_back(Xhat.normals().row(i));
    offs.push_back(Xhat.offsets()(i));
  }
  for (int i = 0; i < V.normals().rows(); ++i) {
    rows.push_back(V.normals().row(i) * K);
    offs.push_back(V.offsets()(i));
  }
  const int base = static_cast<int>(rows.size());

  MatrixXd N(base, n);
  VectorXd c(base);
  for (int i = 0; i < base; ++i) {
    N.row(i) = rows[static_cast<size_t>(i)];
    c(i) = offs[static_cast<size_t>(i)];
  }

  MatrixXd cur = N;  // base rows propagated k steps
  bool closed = false;
  for (int k = 1; k <= 300 && !closed; ++k) {
    cur = cur * Ak;
    closed = true;
    std::vector<int> newly;
    for (int i = 0; i < base; ++i) {
      auto r = lp::maximize(cur.row(i).transpose(), N, c);
      if (r.status == lp::LpStatus::Optimal && r.value <= c(i) + 1e-10)
        continue;  // redundant
      closed = false;
      newly.push_back(i);
    }
    if (newly.empty()) break;
    MatrixXd N2(N.rows() + static_cast<int>(newly.size()), n);
    VectorXd c2(N2.rows());
    N2.topRows(N.rows()) = N;
    c2.head(N.rows()) = c;
    for (size_t j = 0; j < newly.size(); ++j) {
      N2.row(N.rows() + static_cast<int>(j)) = cur.row(newly[j]);
      c2(N.rows() + static_cast<int>(j)) = c(newly[j]);
    }
    N = N2;
    c = c2;
  }
  if (!closed) {
    out.message = "terminal set iteration did not close";
    return out;
  }

  // prune redundant rows to keep the QP small
  std::vector<int> keep;
  for (int i = 0; i < N.rows(); ++i) {
    MatrixXd No(N.rows() - 1, n);
    VectorXd co(N.rows() - 1);
    int r = 0;
    for (int j = 0; j < N.rows(); ++j) {
      if (j == i) continue;
      No.row(r) = N.row(j);
      co(r) = c(j);
      ++r;
    }
    auto lpres = lp::maximize(N.row(i).transpose(), No, co);
    if (lpres.status == lp::LpStatus::Optimal && lpres.value <= c(i) + 1e-10)
      continue;  // row i implied by the rest
    keep.push_back(i);
  }
  MatrixXd Nf(static_cast<int>(keep.size()), n);
  VectorXd cf(static_cast<int>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) {
    Nf.row(static_cast<int>(j)) = N.row(keep[j]);
    cf(static_cast<int>(j)) = c(keep[j]);
  }
  out.Xf = HPolytope::raw(Nf, cf, false, VectorXd(), MatrixXd(), true, false);
  if (!out.Xf.origin_in_interior()) {
    out.message = "terminal set lost origin interior";
    return out;
  }
  out.ok = true;
  return out;
}

DesignOutcome design_controller(const model::SubsystemModel& m,
                                const std::map<int, geom::HPolytope>& parent_sets,
                                const DesignOptions& opts) {
  DesignOutcome out;
  const int n = m.nx();

  TubeController tc;
  tc.id = m.id;
  tc.N = opts.horizon;
  tc.omega = opts.omega;
  tc.inflation = opts.inflation;
  tc.Q = opts.Q.size() ? opts.Q : MatrixXd::Identity(n, n);
  tc.R = opts.R.size() ? opts.R : MatrixXd::Identity(m.nu(), m.nu());

  // Step III: disturbance set and Zbar0
  tc.W = coupling_set(m, parent_sets, opts.coupling_grid, opts.inflation);
  const VectorXd w_hw = box_halfwidths(tc.W) + box_center(tc.W).cwiseAbs();
  tc.Zbar0 = HPolytope::box(
      VectorXd::Zero(n),
      ((w_hw.array() + opts.omega) * 1.05).matrix());
  if (!geom::contains(m.X, tc.Zbar0)) {
    out.failed = FailedStep::StepIII_Inclusion;
    out.message = "Zbar0 not contained in X";
    return out;
  }

  // Step IV substitute: LQR gain and mRPI tube
  try {
    auto lq = ctrl::lqr(m.A, m.B, tc.Q, tc.R);
    tc.K = lq.K;
    tc.P = lq.P;
  } catch (const std::exception& e) {
    out.failed = FailedStep::Numerical;
    out.message = std::string("riccati: ") + e.what();
    return out;
  }
  const MatrixXd Ak = m.A + m.B * tc.K;
  std::vector<VectorXd> kdirs;
  for (int r = 0; r < tc.K.rows(); ++r)
    kdirs.push_back(tc.K.row(r).transpose());
  auto rpi = rpi_tube(Ak, tc.W, opts.mrpi_eps, kdirs);
  if (!rpi.ok) {
    out.failed = FailedStep::StepIV_Feasibility;
    out.message = rpi.message;
    return out;
  }
  tc.Z = rpi.Z;
  tc.mrpi_alpha = rpi.alpha;
  tc.mrpi_terms = rpi.terms;
  if (!geom::contains(m.X, tc.Z)) {
    out.failed = FailedStep::StepIV_Feasibility;
    out.message = "tube cross-section exceeds X";
    return out;
  }
  tc.Uz = geom::linear_image_box(tc.Z, tc.K);

  // Step V: tightened constraints and terminal ingredients
  geom::HPolytope psi_set;
  {
    const int p = m.npsi();
    VectorXd c(p), hw(p);
    for (int k = 0; k < p; ++k) {
      const auto& e = m.psi_layout[static_cast<size_t>(k)];
      auto it = parent_sets.find(e.parent);
      if (it == parent_sets.end()) {
        c(k) = 0.0;
        hw(k) = 0.0;
        continue;
      }
      VectorXd d = VectorXd::Zero(it->second.dim());
      d(e.component) = 1.0;
      const double hi = geom::support(it->second, d).value;
      const double lo = -geom::support(it->second, (-d).eval()).value;
      c(k) = 0.5 * (hi + lo);
      hw(k) = 0.5 * (hi - lo);
    }
    psi_set = HPolytope::box(c, hw);
  }
  try {
    tc.bounds =
        estimate_matched_bounds(m, psi_set, opts.bound_samples, opts.inflation);
  } catch (const std::exception& e) {
    out.failed = FailedStep::Numerical;
    out.message = e.what();
    return out;
  }

  auto tight = tighten_constraints(m, tc.Z, tc.Uz, tc.bounds, opts);
  if (!tight.ok) {
    out.failed = FailedStep::TightenedEmpty;
    out.message = tight.message;
    return out;
  }
  tc.Xhat = tight.Xhat;
  tc.V = tight.V;

  auto term = terminal_set(Ak, tc.K, tc.Xhat, tc.V);
  if (!term.ok) {
    out.failed = FailedStep::Numerical;
    out.message = term.message;
    return out;
  }
  tc.Xf = term.Xf;

  out.controller = std::move(tc);
  return out;
}

std::string verify_controller(const model::SubsystemModel& m,
                              const TubeController& c, int boundary_samples,
                              uint64_t seed) {
  const int n = m.nx();
  const MatrixXd Ak = m.A + m.B * c.K;

  // Step III inclusions, with the ball handled through its support function
  for (int i = 0; i < c.Zbar0.normals().rows(); ++i) {
    const VectorXd nr = c.Zbar0.normals().row(i).transpose();
    const double lhs =
        geom::support(c.W, nr).value + c.omega * nr.norm();
    if (lhs > c.Zbar0.offsets()(i) + geom::kSetTol)
      return "W + ball not inside Zbar0";
  }
  if (!geom::contains(m.X, c.Zbar0)) return "Zbar0 not inside X";
  if (!geom::contains(m.X, c.Z)) return "Z not inside X";

  // Eq. 6a: Xhat + Z inside X
  for (int i = 0; i < m.X.normals().rows(); ++i) {
    const VectorXd nr = m.X.normals().row(i).transpose();
    const double lhs =
        geom::support(c.Xhat, nr).value + geom::support(c.Z, nr).value;
    if (lhs > m.X.offsets()(i) + geom::kSetTol) return "Eq. 6a violated";
  }

  // Eq. 6b by worst-case interval evaluation
  {
    const auto ginv = c.bounds.g_inv_range();
    const double gmax = std::max(std::abs(ginv.lo), std::abs(ginv.hi));
    for (int r = 0; r < m.nu(); ++r) {
      VectorXd e = VectorXd::Zero(m.nu());
      e(r) = 1.0;
      const double worst = gmax * (c.bounds.h_halfwidth(r) +
                                   geom::support(c.V, e).value +
                                   geom::support(c.Uz, e).value);
      const double ubar = std::min(geom::support(m.U, e).value,
                                   geom::support(m.U, (-e).eval()).value);
      if (worst > ubar + geom::kSetTol) return "Eq. 6b violated";
    }
  }

  // Terminal set: invariance, containment, input admissibility
  if (!geom::contains(c.Xhat, c.Xf)) return "Xf not inside Xhat";
  for (int i = 0; i < c.Xf.normals().rows(); ++i) {
    auto r = lp::maximize(Ak.transpose() * c.Xf.normals().row(i).transpose(),
                          c.Xf.normals(), c.Xf.offsets());
    if (r.status != lp::LpStatus::Optimal ||
        r.value > c.Xf.offsets()(i) + geom::kSetTol)
      return "Xf not positively invariant";
  }
  for (int r = 0; r < m.nu(); ++r) {
    VectorXd e = VectorXd::Zero(m.nu());
    e(r) = 1.0;
    auto up = lp::maximize(c.K.transpose() * e, c.Xf.normals(), c.Xf.offsets());
    auto dn = lp::maximize(-(c.K.transpose() * e), c.Xf.normals(), c.Xf.offsets());
    if (up.value > geom::support(c.V, e).value + geom::kSetTol ||
        dn.value > geom::support(c.V, (-e).eval()).value + geom::kSetTol)
      return "K Xf not inside V";
  }

  // Sampled one-step RCI check on the tube boundary against W vertices
  if (boundary_samples > 0 && c.W.has_generators()) {
    const VectorXd whw = box_halfwidths(c.W);
    const VectorXd wc = box_center(c.W);
    std::vector<VectorXd> wverts;
    const int nw = c.W.dim();
    for (uint64_t mask = 0; mask < (1ULL << nw); ++mask) {
      VectorXd w = wc;
      for (int j = 0; j < nw; ++j)
        w(j) += ((mask >> j) & 1 ? 1.0 : -1.0) * whw(j);
      wverts.push_back(w);
    }
    for (int s = 0; s < boundary_samples; ++s) {
      VectorXd d(n);
      for (int k = 0; k < n; ++k)
        d(k) = unit_draw(seed, static_cast<uint64_t>(s) * n + k);
      if (d.norm() < 1e-9) continue;
      const VectorXd x = geom::support_point(c.Z, d);
      for (const auto& w : wverts) {
        const VectorXd xp = Ak * x + w;
        if (c.Z.point_margin(xp) > 1e-6) return "sampled RCI check failed";
      }
    }
  }
  return {};
}

}  // namespace pnpc::design
