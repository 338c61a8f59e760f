#include "pnpc/geometry.hpp"

#include <cmath>

#include "pnpc/lp.hpp"

namespace pnpc::geom {
namespace {

void check_same_dim(const HPolytope& a, const HPolytope& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("polytope dimension mismatch");
}

bool generators_axis_aligned(const Eigen::MatrixXd& G) {
  for (int j = 0; j < G.cols(); ++j) {
    int nz = 0;
    for (int i = 0; i < G.rows(); ++i)
      if (G(i, j) != 0.0) ++nz;
    if (nz > 1) return false;
  }
  return true;
}

double zonotope_support(const Eigen::VectorXd& c, const Eigen::MatrixXd& G,
                        const Eigen::VectorXd& d) {
  double s = c.dot(d);
  for (int j = 0; j < G.cols(); ++j) s += std::abs(G.col(j).dot(d));
  return s;
}

// Exact halfspace form of a generator-form set: axis normals always, plus
// generator-perpendicular normals in 2-D. For axis-aligned generators the
// axis normals alone are exact in any dimension.
void derive_halfspaces(const Eigen::VectorXd& c, const Eigen::MatrixXd& G,
                       Eigen::MatrixXd& normals, Eigen::VectorXd& offsets) {
  const int n = static_cast<int>(c.size());
  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  if (n == 2) {
    for (int j = 0; j < G.cols(); ++j) {
      Eigen::VectorXd g = G.col(j);
      const double len = g.norm();
      if (len < 1e-14) continue;
      Eigen::VectorXd perp(2);
      perp << -g(1) / len, g(0) / len;
      bool dup = false;
      for (const auto& d : dirs)
        if ((d - perp).norm() < 1e-12 || (d + perp).norm() < 1e-12) {
          dup = true;
          break;
        }
      if (!dup) {
        dirs.push_back(perp);
        dirs.push_back(-perp);
      }
    }
  }
  normals.resize(static_cast<int>(dirs.size()), n);
  offsets.resize(static_cast<int>(dirs.size()));
  for (size_t k = 0; k < dirs.size(); ++k) {
    normals.row(static_cast<int>(k)) = dirs[k].transpose();
    offsets(static_cast<int>(k)) = zonotope_support(c, G, dirs[k]);
  }
}

}  // namespace

HPolytope HPolytope::box(const Eigen::VectorXd& center,
                         const Eigen::VectorXd& half_widths) {
  if (center.size() != half_widths.size())
    throw std::invalid_argument("box: center/half_widths size mismatch");
  if ((half_widths.array() < 0.0).any())
    throw std::invalid_argument("box: negative half-width");
  const int n = static_cast<int>(center.size());
  Eigen::MatrixXd G = half_widths.asDiagonal();
  Eigen::MatrixXd N;
  Eigen::VectorXd off;
  derive_halfspaces(center, G, N, off);
  return raw(std::move(N), std::move(off), true, center, std::move(G), true,
             false);
}

HPolytope HPolytope::singleton(const Eigen::VectorXd& point) {
  return box(point, Eigen::VectorXd::Zero(point.size()));
}

HPolytope HPolytope::zonotope(const Eigen::VectorXd& center,
                              const Eigen::MatrixXd& generators) {
  if (generators.rows() != center.size())
    throw std::invalid_argument("zonotope: generator dimension mismatch");
  const int n = static_cast<int>(center.size());
  Eigen::MatrixXd N;
  Eigen::VectorXd off;
  if (n <= 2 || generators_axis_aligned(generators)) {
    derive_halfspaces(center, generators, N, off);
  }
  return raw(std::move(N), std::move(off), true, center, generators, true,
             false);
}

HPolytope HPolytope::from_halfspaces(const Eigen::MatrixXd& normals,
                                     const Eigen::VectorXd& offsets) {
  if (normals.rows() != offsets.size())
    throw std::invalid_argument("from_halfspaces: row count mismatch");
  auto feas = lp::feasible_point(normals, offsets);
  if (feas.status != lp::LpStatus::Optimal)
    throw std::invalid_argument("from_halfspaces: empty polytope");
  const int n = static_cast<int>(normals.cols());
  bool bounded = true;
  for (int i = 0; i < n && bounded; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    for (int s = 0; s < 2; ++s) {
      auto r = lp::maximize(s == 0 ? e : Eigen::VectorXd(-e), normals, offsets);
      if (r.status == lp::LpStatus::Unbounded) {
        bounded = false;
        break;
      }
    }
  }
  return raw(normals, offsets, false, Eigen::VectorXd(), Eigen::MatrixXd(),
             bounded, false);
}

HPolytope HPolytope::raw(Eigen::MatrixXd normals, Eigen::VectorXd offsets,
                         bool has_gen, Eigen::VectorXd center,
                         Eigen::MatrixXd generators, bool bounded, bool empty) {
  HPolytope p;
  p.dim_ = has_gen ? static_cast<int>(center.size())
                   : static_cast<int>(normals.cols());
  p.normals_ = std::move(normals);
  p.offsets_ = std::move(offsets);
  p.has_generators_ = has_gen;
  p.center_ = std::move(center);
  p.generators_ = std::move(generators);
  p.bounded_ = bounded;
  p.empty_ = empty;
  return p;
}

bool HPolytope::origin_in_interior(double tol) const {
  if (empty_) return false;
  if (!has_halfspaces())
    throw std::runtime_error("origin_in_interior needs halfspace form");
  for (int i = 0; i < normals_.rows(); ++i) {
    const double nn = normals_.row(i).norm();
    if (nn < 1e-14) continue;
    if (offsets_(i) / nn <= tol) return false;
  }
  return true;
}

bool HPolytope::contains_point(const Eigen::VectorXd& x, double tol) const {
  return point_margin(x) <= tol;
}

double HPolytope::point_margin(const Eigen::VectorXd& x) const {
  if (empty_) return std::numeric_limits<double>::infinity();
  if (!has_halfspaces())
    throw std::runtime_error("point_margin needs halfspace form");
  if (x.size() != dim_) throw std::invalid_argument("point dimension mismatch");
  return (normals_ * x - offsets_).maxCoeff();
}

SupportResult support(const HPolytope& p, const Eigen::VectorXd& direction) {
  if (p.is_empty()) throw std::logic_error("support of empty set");
  if (direction.size() != p.dim())
    throw std::invalid_argument("support: dimension mismatch");
  if (p.has_generators())
    return {zonotope_support(p.center(), p.generators(), direction), true};
  auto r = lp::maximize(direction, p.normals(), p.offsets());
  if (r.status == lp::LpStatus::Unbounded) return {0.0, false};
  if (r.status != lp::LpStatus::Optimal)
    throw std::runtime_error("support LP failed");
  return {r.value, true};
}

Eigen::VectorXd support_point(const HPolytope& p,
                              const Eigen::VectorXd& direction) {
  if (p.has_generators()) {
    Eigen::VectorXd x = p.center();
    for (int j = 0; j < p.generators().cols(); ++j) {
      const double s = p.generators().col(j).dot(direction);
      x += (s >= 0.0 ? 1.0 : -1.0) * p.generators().col(j);
    }
    return x;
  }
  auto r = lp::maximize(direction, p.normals(), p.offsets());
  if (r.status != lp::LpStatus::Optimal)
    throw std::runtime_error("support_point LP failed");
  return r.x;
}

HPolytope minkowski_sum(const HPolytope& a, const HPolytope& b) {
  check_same_dim(a, b);
  if (a.is_empty() || b.is_empty())
    throw std::logic_error("minkowski_sum of empty set");
  if (!a.has_generators() || !b.has_generators())
    throw std::runtime_error(
        "minkowski_sum: exact sums require generator-form sets");
  Eigen::MatrixXd G(a.dim(), a.generators().cols() + b.generators().cols());
  G << a.generators(), b.generators();
  return HPolytope::zonotope(a.center() + b.center(), G);
}

HPolytope pontryagin_diff(const HPolytope& a, const HPolytope& b) {
  check_same_dim(a, b);
  if (!a.has_halfspaces())
    throw std::runtime_error("pontryagin_diff: minuend needs halfspace form");
  Eigen::VectorXd off(a.offsets().size());
  for (int i = 0; i < a.normals().rows(); ++i) {
    auto s = support(b, a.normals().row(i).transpose());
    if (!s.bounded)
      return HPolytope::raw(a.normals(), off, false, Eigen::VectorXd(),
                            Eigen::MatrixXd(), true, true);
    off(i) = a.offsets()(i) - s.value;
  }
  auto feas = lp::feasible_point(a.normals(), off);
  const bool empty = feas.status != lp::LpStatus::Optimal;

  // Box erosion stays a box; recover the generator form in that case.
  if (!empty && a.has_generators() &&
      generators_axis_aligned(a.generators())) {
    const int n = a.dim();
    Eigen::VectorXd hi(n), lo(n);
    hi.setConstant(std::numeric_limits<double>::infinity());
    lo.setConstant(-std::numeric_limits<double>::infinity());
    for (int i = 0; i < a.normals().rows(); ++i) {
      for (int k = 0; k < n; ++k) {
        const double c = a.normals()(i, k);
        if (std::abs(c) < 1e-14 || a.normals().row(i).cwiseAbs().sum() >
                                       std::abs(c) + 1e-14)
          continue;
        if (c > 0)
          hi(k) = std::min(hi(k), off(i) / c);
        else
          lo(k) = std::max(lo(k), off(i) / c);
      }
    }
    if (hi.allFinite() && lo.allFinite() && (hi - lo).minCoeff() >= 0.0)
      return HPolytope::box((hi + lo) / 2.0, (hi - lo) / 2.0);
  }
  return HPolytope::raw(a.normals(), off, false, Eigen::VectorXd(),
                        Eigen::MatrixXd(), a.bounded(), empty);
}

bool contains(const HPolytope& outer, const HPolytope& inner, double tol) {
  check_same_dim(outer, inner);
  if (inner.is_empty()) return true;
  if (outer.is_empty()) return false;
  if (!outer.has_halfspaces())
    throw std::runtime_error("contains: outer needs halfspace form");
  for (int i = 0; i < outer.normals().rows(); ++i) {
    auto s = support(inner, outer.normals().row(i).transpose());
    if (!s.bounded || s.value > outer.offsets()(i) + tol) return false;
  }
  return true;
}

HPolytope scale(const HPolytope& p, double factor) {
  if (factor < 0.0) throw std::invalid_argument("scale: negative factor");
  Eigen::VectorXd off = p.offsets() * factor;
  if (p.has_generators())
    return HPolytope::raw(p.normals(), off, true, p.center() * factor,
                          p.generators() * factor, p.bounded(), p.is_empty());
  return HPolytope::raw(p.normals(), off, false, Eigen::VectorXd(),
                        Eigen::MatrixXd(), p.bounded(), p.is_empty());
}

HPolytope linear_image_box(const HPolytope& p, const Eigen::MatrixXd& m) {
  if (m.cols() != p.dim())
    throw std::invalid_argument("linear_image_box: dimension mismatch");
  if (!p.bounded())
    throw std::invalid_argument("linear_image_box: unbounded operand");
  const int r = static_cast<int>(m.rows());
  Eigen::VectorXd hi(r), lo(r);
  for (int i = 0; i < r; ++i) {
    hi(i) = support(p, m.row(i).transpose()).value;
    lo(i) = -support(p, -m.row(i).transpose()).value;
  }
  return HPolytope::box((hi + lo) / 2.0, (hi - lo) / 2.0);
}

}  // namespace pnpc::geom
