#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pnpc::geom {

// Absolute tolerance for set comparisons on support values.
constexpr double kSetTol = 1e-8;

struct SupportResult {
  double value = 0.0;
  bool bounded = true;  // false => value meaningless, set unbounded in d
};

// Halfspace-represented convex set. Runtime sets are boxes or zonotopes
// which additionally carry an exact generator form (x = c + G xi,
// ||xi||_inf <= 1); general H-polytopes support containment/support
// queries only. Zonotopes in dimension <= 2 (and axis-aligned ones in any
// dimension) get an exact halfspace form derived at construction.
class HPolytope {
 public:
  HPolytope() = default;

  static HPolytope box(const Eigen::VectorXd& center,
                       const Eigen::VectorXd& half_widths);
  static HPolytope singleton(const Eigen::VectorXd& point);
  static HPolytope zonotope(const Eigen::VectorXd& center,
                            const Eigen::MatrixXd& generators);
  // Certifies nonemptiness (throws std::invalid_argument when empty) and
  // computes the boundedness flag.
  static HPolytope from_halfspaces(const Eigen::MatrixXd& normals,
                                   const Eigen::VectorXd& offsets);

  int dim() const { return dim_; }
  bool has_halfspaces() const { return normals_.rows() > 0; }
  bool has_generators() const { return has_generators_; }
  bool is_empty() const { return empty_; }
  bool bounded() const { return bounded_; }

  const Eigen::MatrixXd& normals() const { return normals_; }
  const Eigen::VectorXd& offsets() const { return offsets_; }
  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::MatrixXd& generators() const { return generators_; }

  bool origin_in_interior(double tol = kSetTol) const;
  bool contains_point(const Eigen::VectorXd& x, double tol = kSetTol) const;
  // Max violation of the halfspace inequalities at x (<= 0 means inside).
  double point_margin(const Eigen::VectorXd& x) const;

  // Internal factory for results that are known-consistent (skips certs).
  static HPolytope raw(Eigen::MatrixXd normals, Eigen::VectorXd offsets,
                       bool has_gen, Eigen::VectorXd center,
                       Eigen::MatrixXd generators, bool bounded, bool empty);

 private:
  int dim_ = 0;
  Eigen::MatrixXd normals_;    // rows = facet normals
  Eigen::VectorXd offsets_;
  bool has_generators_ = false;
  Eigen::VectorXd center_;
  Eigen::MatrixXd generators_;  // columns
  bool bounded_ = false;
  bool empty_ = false;
};

SupportResult support(const HPolytope& p, const Eigen::VectorXd& direction);

// A point of p attaining the support value in `direction`.
Eigen::VectorXd support_point(const HPolytope& p,
                              const Eigen::VectorXd& direction);

// Exact for generator-form sets; throws for general H-polytopes.
HPolytope minkowski_sum(const HPolytope& a, const HPolytope& b);

// {x : x + b subseteq a}; exact via per-facet support tightening. The
// result may carry the empty flag; emptiness is a condition, not an error.
HPolytope pontryagin_diff(const HPolytope& a, const HPolytope& b);

bool contains(const HPolytope& outer, const HPolytope& inner,
              double tol = kSetTol);

HPolytope scale(const HPolytope& p, double factor);

// Axis-aligned box enclosing {m x : x in p} via support in +-row directions.
HPolytope linear_image_box(const HPolytope& p, const Eigen::MatrixXd& m);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  Interval() = default;
  Interval(double l, double h) : lo(l), hi(h) {
    if (l > h) throw std::invalid_argument("Interval: lo > hi");
  }
  double width() const { return hi - lo; }
  double absmax() const { return std::max(std::abs(lo), std::abs(hi)); }
};

}  // namespace pnpc::geom
