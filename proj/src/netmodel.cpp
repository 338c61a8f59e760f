#include "pnpc/netmodel.hpp"

#include <cmath>
#include <stdexcept>

#include "pnpc/dare.hpp"

namespace pnpc::model {

namespace {
uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

double NoiseSource::draw(int subsystem, int component) const {
  uint64_t h = seed;
  h = mix64(h ^ (0x100000001b3ULL * static_cast<uint64_t>(step + 1)));
  h = mix64(h ^ (0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(subsystem + 1)));
  h = mix64(h ^ (0xc2b2ae3d27d4eb4fULL * static_cast<uint64_t>(component + 1)));
  return 2.0 * (static_cast<double>(h >> 11) / 9007199254740992.0) - 1.0;
}

void Network::add_subsystem(SubsystemModel ctrl, DiagSubsystemModel diag) {
  const int id = ctrl.id;
  if (control_.count(id)) throw std::invalid_argument("duplicate subsystem id");
  active_.insert(id);
  control_.emplace(id, std::move(ctrl));
  diag_.emplace(id, std::move(diag));
}

void Network::register_shared(int gid,
                              const std::vector<std::pair<int, int>>& members) {
  shared_[gid] = members;
}

void Network::set_exogenous(int id, std::function<VectorXd(int)> fn) {
  exo_[id] = std::move(fn);
}

const SubsystemModel& Network::control(int id) const {
  auto it = control_.find(id);
  if (it == control_.end()) throw std::invalid_argument("unknown subsystem id");
  return it->second;
}

SubsystemModel& Network::control(int id) {
  auto it = control_.find(id);
  if (it == control_.end()) throw std::invalid_argument("unknown subsystem id");
  return it->second;
}

const DiagSubsystemModel& Network::diag(int id) const {
  auto it = diag_.find(id);
  if (it == diag_.end()) throw std::invalid_argument("unknown subsystem id");
  return it->second;
}

std::vector<int> Network::ids() const {
  std::vector<int> out;
  for (const auto& [id, _] : control_) out.push_back(id);
  return out;
}

void Network::set_active(int id, bool on) {
  control(id);  // existence check
  if (on)
    active_.insert(id);
  else
    active_.erase(id);
}

std::vector<std::pair<int, int>> Network::shared_members(int gid) const {
  auto it = shared_.find(gid);
  if (it == shared_.end()) throw std::invalid_argument("unknown shared gid");
  std::vector<std::pair<int, int>> out;
  for (const auto& m : it->second)
    if (active_.count(m.first)) out.push_back(m);
  return out;
}

std::vector<int> Network::shared_gids() const {
  std::vector<int> out;
  for (const auto& [gid, _] : shared_) out.push_back(gid);
  return out;
}

VectorXd Network::exogenous(int id, int step) const {
  const auto& m = control(id);
  const int nd = static_cast<int>(m.E.cols());
  auto it = exo_.find(id);
  if (it == exo_.end() || nd == 0) return VectorXd::Zero(nd);
  VectorXd d = it->second(step);
  if (d.size() != nd) throw std::runtime_error("exogenous size mismatch");
  return d;
}

VectorXd Network::assemble_psi(int i, const std::map<int, VectorXd>& states) const {
  const auto& m = control(i);
  VectorXd psi = VectorXd::Zero(m.npsi());
  for (int k = 0; k < m.npsi(); ++k) {
    const auto& e = m.psi_layout[static_cast<size_t>(k)];
    if (!is_active(e.parent)) continue;  // unplugged parents read as zero
    psi(k) = states.at(e.parent)(e.component);
  }
  return psi;
}

VectorXd apply_actuator_faults(const std::vector<FaultSpec>& faults, int id,
                               int t, VectorXd u) {
  for (const auto& f : faults) {
    if (f.mode != FaultSpec::Mode::ActuatorOverride) continue;
    if (f.target != id || t < f.onset) continue;
    u = f.override_value;
  }
  return u;
}

std::map<int, VectorXd> Network::step_plant(
    const std::map<int, VectorXd>& states,
    const std::map<int, VectorXd>& inputs,
    const std::vector<FaultSpec>& faults, int t) const {
  std::map<int, VectorXd> next;
  for (const auto& [id, m] : control_) {
    const VectorXd& x = states.at(id);
    if (!x.allFinite())
      throw std::runtime_error("step_plant: non-finite state in subsystem " +
                               std::to_string(id));
    if (!is_active(id)) {
      next[id] = x;  // frozen while unplugged
      continue;
    }
    auto uit = inputs.find(id);
    if (uit == inputs.end())
      throw std::runtime_error("step_plant: missing input for subsystem " +
                               std::to_string(id));
    VectorXd u = apply_actuator_faults(faults, id, t, uit->second);
    const VectorXd psi = assemble_psi(id, states);
    VectorXd xp = m.A * x + m.B * (m.g(x, psi) * u + m.h(x, psi));
    if (m.E.cols() > 0) xp += m.E * exogenous(id, t);
    if (m.npsi() > 0 || m.w) {
      VectorXd w = m.w ? m.w(psi) : VectorXd::Zero(m.nx());
      xp += w;
    }
    for (const auto& f : faults) {
      if (f.mode != FaultSpec::Mode::AdditiveState) continue;
      if (f.target != id || t < f.onset) continue;
      xp += f.fault_map(x, psi, u, t);
    }
    next[id] = xp;
  }
  return next;
}

std::map<int, VectorXd> Network::measure(const std::map<int, VectorXd>& states,
                                         const NoiseSource& noise) const {
  std::map<int, VectorXd> out;
  for (const auto& [id, dm] : diag_) {
    if (!is_active(id)) continue;
    VectorXd y(dm.nx());
    for (int k = 0; k < dm.nx(); ++k) {
      const auto& e = dm.x_layout[static_cast<size_t>(k)];
      if (is_active(e.owner)) {
        y(k) = states.at(e.owner)(e.component) +
               dm.rho_bar(k) * noise.draw(id, k);
      } else {
        y(k) = 0.0;  // disconnected channel
      }
    }
    out[id] = y;
  }
  return out;
}

geom::HPolytope psi_box(const Network& net, int i) {
  const auto& m = net.control(i);
  const int p = m.npsi();
  VectorXd c(p), hw(p);
  for (int k = 0; k < p; ++k) {
    const auto& e = m.psi_layout[static_cast<size_t>(k)];
    const auto& Xp = net.control(e.parent).X;
    VectorXd dir = VectorXd::Zero(Xp.dim());
    dir(e.component) = 1.0;
    const double hi = geom::support(Xp, dir).value;
    const double lo = -geom::support(Xp, (-dir).eval()).value;
    c(k) = 0.5 * (hi + lo);
    hw(k) = 0.5 * (hi - lo);
  }
  return geom::HPolytope::box(c, hw);
}

void Network::validate() const {
  for (const auto& [id, m] : control_) {
    if (!ctrl::is_stabilizable(m.A, m.B))
      throw std::runtime_error("subsystem " + std::to_string(id) +
                               ": (A,B) not stabilizable");
    for (const auto* s : {&m.X, &m.U, &m.O}) {
      if (!s->bounded() || !s->origin_in_interior())
        throw std::runtime_error(
            "subsystem " + std::to_string(id) +
            ": constraint set not compact with origin interior");
    }
    for (const auto& e : m.psi_layout) {
      if (e.parent == id)
        throw std::runtime_error("subsystem " + std::to_string(id) +
                                 ": psi references itself");
      bool found = false;
      for (int p : m.parents) found = found || p == e.parent;
      if (!found)
        throw std::runtime_error("subsystem " + std::to_string(id) +
                                 ": psi references a non-parent");
    }
    // sampled invertibility certificate for g over X x Psi
    if (m.npsi() >= 0) {
      const auto psi_set = psi_box(*this, id);
      NoiseSource ns{static_cast<uint64_t>(1234 + id), 0};
      for (int s = 0; s < 512; ++s) {
        VectorXd x(m.nx()), psi(m.npsi());
        for (int k = 0; k < m.nx(); ++k) {
          VectorXd d = VectorXd::Zero(m.nx());
          d(k) = 1.0;
          const double hi = geom::support(m.X, d).value;
          ns.step = 2 * s;
          x(k) = hi * ns.draw(id, k);
        }
        for (int k = 0; k < m.npsi(); ++k) {
          ns.step = 2 * s + 1;
          psi(k) = (psi_set.center()(k) +
                    psi_set.generators()(k, k) * ns.draw(id, k));
        }
        if (std::abs(m.g(x, psi)) < 1e-6)
          throw std::runtime_error("subsystem " + std::to_string(id) +
                                   ": g not bounded away from zero");
      }
    }
  }
  // diagnosis side: parent-only information flow and registry consistency
  for (const auto& [id, dm] : diag_) {
    const auto& m = control_.at(id);
    for (const auto& e : dm.x_layout) {
      if (e.owner == id) continue;
      bool is_parent = false;
      for (int p : m.parents) is_parent = is_parent || p == e.owner;
      if (!is_parent)
        throw std::runtime_error("diag " + std::to_string(id) +
                                 ": extended state needs non-parent data");
      if (e.shared_gid < 0)
        throw std::runtime_error("diag " + std::to_string(id) +
                                 ": foreign component not marked shared");
    }
    for (const auto& e : dm.x_layout) {
      if (e.shared_gid < 0) continue;
      auto it = shared_.find(e.shared_gid);
      if (it == shared_.end())
        throw std::runtime_error("diag " + std::to_string(id) +
                                 ": shared gid missing from registry");
      bool member = false;
      for (const auto& mm : it->second) member = member || mm.first == id;
      if (!member)
        throw std::runtime_error("diag " + std::to_string(id) +
                                 ": not registered in its shared set");
    }
  }
  // each shared variable has exactly one owner among its members
  for (const auto& [gid, members] : shared_) {
    int owners = 0;
    for (const auto& [sid, comp] : members) {
      const auto& dm = diag_.at(sid);
      if (dm.x_layout[static_cast<size_t>(comp)].owner == sid) ++owners;
    }
    if (owners != 1)
      throw std::runtime_error("shared gid " + std::to_string(gid) +
                               ": expected exactly one owning subsystem");
  }
}

}  // namespace pnpc::model
