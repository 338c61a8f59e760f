#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pnpc/geometry.hpp"

namespace pnpc::model {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Matched nonlinearities of one subsystem. Plant convention throughout:
//   x+ = A x + B [g(x,psi) u + h(x,psi)] + E d + w(psi)
// The feedback-linearizing control law cancels h with the opposite sign.
using GainFn = std::function<double(const VectorXd& x, const VectorXd& psi)>;
using DriftFn = std::function<VectorXd(const VectorXd& x, const VectorXd& psi)>;
using CouplingFn = std::function<VectorXd(const VectorXd& psi)>;
// Continuous-time right-hand side, used when a scenario simulates the
// physical plant between samples: f(x, psi, u, d) -> xdot.
using ContinuousFn = std::function<VectorXd(
    const VectorXd& x, const VectorXd& psi, const VectorXd& u,
    const VectorXd& d)>;

struct PsiEntry {
  int parent = 0;
  int component = 0;
};

struct SubsystemModel {
  int id = 0;
  MatrixXd A;
  MatrixXd B;
  GainFn g;
  DriftFn h;
  CouplingFn w;
  MatrixXd E;  // known exogenous input map; 0 columns when unused
  geom::HPolytope X, U, O;
  std::vector<int> parents;   // N_i, ordered
  std::vector<int> children;  // F_i
  std::vector<PsiEntry> psi_layout;
  ContinuousFn cont_f;  // optional physical model for fine-step simulation

  // Closed-form bounds a scenario can register so the designer does not
  // have to fall back on sampling.
  std::optional<geom::Interval> exact_g_range;
  std::optional<VectorXd> exact_h_halfwidth;

  int nx() const { return static_cast<int>(A.rows()); }
  int nu() const { return static_cast<int>(B.cols()); }
  int npsi() const { return static_cast<int>(psi_layout.size()); }
};

struct XLayoutEntry {
  int owner = 0;      // subsystem the underlying state belongs to
  int component = 0;  // component index within the owner's state
  int shared_gid = -1;  // global shared-variable id, -1 if not shared
};

struct DiagSubsystemModel {
  int id = 0;
  MatrixXd A_tilde;
  MatrixXd B_tilde;
  MatrixXd E_tilde;
  GainFn g_tilde;  // evaluated on (y, z)
  DriftFn h_tilde;
  std::vector<XLayoutEntry> x_layout;          // defines x_tilde
  std::vector<PsiEntry> psi_tilde_layout;      // sources of z_i
  geom::HPolytope X_tilde;
  VectorXd rho_bar;  // per extended component

  int nx() const { return static_cast<int>(x_layout.size()); }
};

struct FaultSpec {
  enum class Mode { AdditiveState, ActuatorOverride };
  int target = 0;
  int onset = 0;  // steps
  Mode mode = Mode::AdditiveState;
  std::function<VectorXd(const VectorXd& x, const VectorXd& psi,
                         const VectorXd& u, int t)>
      fault_map;                // AdditiveState
  VectorXd override_value;      // ActuatorOverride
};

struct Event {
  double time = 0.0;
  std::string kind;  // detection | unplug | plug_in | retune
  int target = 0;
  std::vector<int> affected;
  std::string reason;
};

// Deterministic counter-based noise: every draw is a pure function of
// (seed, step, subsystem, component), so runs replay bit-identically.
struct NoiseSource {
  uint64_t seed = 0;
  int step = 0;
  // uniform in [-1, 1]
  double draw(int subsystem, int component) const;
};

class Network {
 public:
  void add_subsystem(SubsystemModel ctrl, DiagSubsystemModel diag);
  void register_shared(int gid, const std::vector<std::pair<int, int>>& members);
  void set_exogenous(int id, std::function<VectorXd(int step)> fn);

  const SubsystemModel& control(int id) const;
  SubsystemModel& control(int id);
  const DiagSubsystemModel& diag(int id) const;
  std::vector<int> ids() const;
  const std::set<int>& active() const { return active_; }
  bool is_active(int id) const { return active_.count(id) > 0; }
  void set_active(int id, bool on);

  // S^k restricted to currently plugged-in subsystems.
  std::vector<std::pair<int, int>> shared_members(int gid) const;
  std::vector<int> shared_gids() const;

  VectorXd exogenous(int id, int step) const;

  // Interconnection vector per psi_layout; unplugged parents contribute 0.
  VectorXd assemble_psi(int i, const std::map<int, VectorXd>& states) const;

  // One Eq. 1 step for every subsystem; inactive ones stay frozen.
  std::map<int, VectorXd> step_plant(const std::map<int, VectorXd>& states,
                                     const std::map<int, VectorXd>& inputs,
                                     const std::vector<FaultSpec>& faults,
                                     int t) const;

  // Diagnosis-side outputs y_i = x_tilde_i + rho_i for active subsystems.
  std::map<int, VectorXd> measure(const std::map<int, VectorXd>& states,
                                  const NoiseSource& noise) const;

  // Structural and assumption checks; throws std::runtime_error on failure.
  void validate() const;

  void log_event(Event e) { event_log_.push_back(std::move(e)); }
  const std::vector<Event>& event_log() const { return event_log_; }

 private:
  std::map<int, SubsystemModel> control_;
  std::map<int, DiagSubsystemModel> diag_;
  std::set<int> active_;
  std::map<int, std::vector<std::pair<int, int>>> shared_;  // gid -> members
  std::map<int, std::function<VectorXd(int)>> exo_;
  std::vector<Event> event_log_;
};

// Box over-approximation of Psi_i induced by the parents' state sets.
geom::HPolytope psi_box(const Network& net, int i);

// Applies any ActuatorOverride fault active at time t to the input.
VectorXd apply_actuator_faults(const std::vector<FaultSpec>& faults, int id,
                               int t, VectorXd u);

}  // namespace pnpc::model
