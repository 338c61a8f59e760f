#pragma once

#include <map>
#include <optional>
#include <string>

#include "pnpc/geometry.hpp"
#include "pnpc/netmodel.hpp"

namespace pnpc::design {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct DesignOptions {
  MatrixXd Q;  // stage state weight; identity when empty
  MatrixXd R;  // stage input weight; identity when empty
  int horizon = 10;
  double omega = 1e-3;      // radius of the ball added in Step III
  double inflation = 0.05;  // inflation factor on sampled set estimates
  double mrpi_eps = 1e-3;   // relative outer-approximation criterion
  int coupling_grid = 21;   // grid points per interconnection dimension
  int bound_samples = 10000;
  // Setpoint-tracking margins: the tightened sets are shrunk by these so a
  // single design stays valid for every shifted equilibrium.
  double input_margin = 0.0;
  VectorXd state_margin;  // empty = zeros
};

struct MatchedBounds {
  geom::Interval g_range;   // range of g over X x Psi (same sign throughout)
  VectorXd h_halfwidth;     // componentwise bound on |h|
  geom::Interval g_inv_range() const {
    return {1.0 / g_range.hi, 1.0 / g_range.lo};
  }
};

struct TubeController {
  int id = 0;
  MatrixXd K;
  geom::HPolytope Z;      // tube cross-section, halfspace form, RPI-certified
  geom::HPolytope Uz;     // bounding box of K Z
  geom::HPolytope Xhat;   // tightened state set
  geom::HPolytope V;      // tightened input set
  geom::HPolytope Xf;     // terminal set (invariant polytope)
  geom::HPolytope W;      // coupling disturbance set
  geom::HPolytope Zbar0;
  MatrixXd Q, R, P;
  int N = 0;
  double omega = 0.0;
  MatchedBounds bounds;
  double inflation = 0.0;
  double mrpi_alpha = 0.0;
  int mrpi_terms = 0;
};

enum class FailedStep {
  None,
  StepIII_Inclusion,
  StepIV_Feasibility,
  TightenedEmpty,
  Numerical,
};

std::string to_string(FailedStep s);

struct DesignOutcome {
  std::optional<TubeController> controller;
  FailedStep failed = FailedStep::None;
  std::string message;
  bool ok() const { return controller.has_value(); }
};

// Axis-aligned box over-approximation of w_i(Psi_i) by dense grid sampling
// plus an inflation margin. Monotone in the parent sets. Parents missing
// from `parent_sets` fall back to their X_j stored in the network model.
geom::HPolytope coupling_set(const model::SubsystemModel& m,
                             const std::map<int, geom::HPolytope>& parent_sets,
                             int grid_per_dim = 21, double inflation = 0.05);

// Interval over-approximations of g and h over X x Psi. Uses closed-form
// bounds registered on the model when present, otherwise deterministic
// sampling with the declared inflation factor. Throws when g changes sign
// or approaches zero (invertibility violation).
MatchedBounds estimate_matched_bounds(const model::SubsystemModel& m,
                                      const geom::HPolytope& psi_set,
                                      int n_samples, double inflation);

struct TightenResult {
  geom::HPolytope Xhat;
  geom::HPolytope V;
  bool ok = false;
  std::string message;
};

TightenResult tighten_constraints(const model::SubsystemModel& m,
                                  const geom::HPolytope& Z,
                                  const geom::HPolytope& Uz,
                                  const MatchedBounds& bounds,
                                  const DesignOptions& opts);

// Outer approximation of the minimal robust positively invariant set of
// x+ = Ak x + w, w in W, returned in a halfspace form certified to satisfy
// Ak Z (+) W inside Z.
struct RpiResult {
  geom::HPolytope Z;
  double alpha = 0.0;
  int terms = 0;
  bool ok = false;
  std::string message;
};

RpiResult rpi_tube(const MatrixXd& Ak, const geom::HPolytope& W, double eps,
                   const std::vector<VectorXd>& extra_dirs = {});

// Largest constraint-admissible positively invariant polytope of
// x+ = Ak x inside {x in Xhat : K x in V}.
struct TerminalResult {
  geom::HPolytope Xf;
  bool ok = false;
  std::string message;
};

TerminalResult terminal_set(const MatrixXd& Ak, const MatrixXd& K,
                            const geom::HPolytope& Xhat,
                            const geom::HPolytope& V);

DesignOutcome design_controller(const model::SubsystemModel& m,
                                const std::map<int, geom::HPolytope>& parent_sets,
                                const DesignOptions& opts);

// Re-verifies every TubeController type invariant from scratch (support
// queries and sampled one-step invariance); returns an empty string when
// everything holds, else a description of the first failure.
std::string verify_controller(const model::SubsystemModel& m,
                              const TubeController& c, int boundary_samples,
                              uint64_t seed);

}  // namespace pnpc::design
