#pragma once

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>
#include <vector>

#include "bosonstar/spectral/functionals.hpp"

namespace bosonstar {

struct EvolutionControls {
  double dt0 = 1e-3;
  double t_end = 1.0;
  double cfl = 0.1;
  double dt_floor = 1e-8;
  std::size_t snapshot_stride = 10;
  double h_half_cap = 1e8;
  bool adaptive = true;
  bool nonlinear = true;
  double unresolved_width_factor = 10.0;  // records with mass/K ≤ factor·dr are unresolved
  std::size_t monotone_window = 100;
  double boundary_fraction = 0.9;

  void validate() const {
    std::vector<std::string> bad;
    if (!(dt_floor > 0.0)) bad.push_back("dt_floor");
    if (!(dt0 > dt_floor)) bad.push_back("dt0");
    if (!(t_end >= 0.0)) bad.push_back("t_end");
    if (!(cfl > 0.0 && cfl <= 1.0)) bad.push_back("cfl");
    if (snapshot_stride == 0) bad.push_back("snapshot_stride");
    if (!(h_half_cap > 0.0)) bad.push_back("h_half_cap");
    if (!(unresolved_width_factor > 0.0)) bad.push_back("unresolved_width_factor");
    if (!(boundary_fraction > 0.0 && boundary_fraction < 1.0)) bad.push_back("boundary_fraction");
    if (!bad.empty()) throw ValidationError(bad);
  }
};

enum class Termination { HorizonReached, StepFloor, NormCap, Diverged };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::HorizonReached: return "HorizonReached";
    case Termination::StepFloor: return "StepFloor";
    case Termination::NormCap: return "NormCap";
    case Termination::Diverged: return "Diverged";
  }
  return "?";
}

struct StepRecord {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double h_half = 0.0;
  double boundary_mass = 0.0;
  double kinetic_homogeneous = 0.0;  // ‖|∇|^{1/2}u‖²
  double max_potential = 0.0;
  bool resolved = true;
};

struct Snapshot {
  std::size_t step = 0;
  double t = 0.0;
  bool resolved = true;
  Field u;
};

struct Trajectory {
  ModelParams params;
  EvolutionControls controls;
  std::vector<Snapshot> snapshots;
  std::vector<StepRecord> records;
  Termination termination = Termination::HorizonReached;
  bool blowup_suspected = false;
  std::string message;

  double initial_mass() const { return records.front().mass; }
  double initial_energy() const { return records.front().energy; }

  std::vector<const Snapshot*> resolved_snapshots() const {
    std::vector<const Snapshot*> out;
    for (const auto& s : snapshots)
      if (s.resolved) out.push_back(&s);
    return out;
  }

  double max_relative_mass_drift() const {
    double d = 0.0;
    for (const auto& r : records) d = std::max(d, std::abs(r.mass - initial_mass()) / initial_mass());
    return d;
  }
};

/// Potential hook that evaluates |x|⁻¹∗|u|².
struct CoulombPotential {
  void operator()(const RadialGrid& g, const std::vector<cplx>& u, std::vector<double>& v) const {
    std::vector<double> rho(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) rho[j] = std::norm(u[j]);
    coulomb_potential_of_density(g, rho, v);
  }
};

/// Strang splitting for i∂ₜu = √(−Δ+m²)u − V u.
class SplitStepper {
 public:
  SplitStepper(RadialGrid g, ModelParams p) : grid_(std::move(g)), params_(p), v_(grid_.size()) {}

  /// Free half step, exact phase rotation e^{+i dt V}, free half step.
  template <class Potential>
  void step(std::vector<cplx>& u, double dt, Potential&& potential) {
    linear(u, 0.5 * dt);
    potential(grid_, u, v_);
    for (std::size_t j = 0; j < u.size(); ++j) u[j] *= std::polar(1.0, dt * v_[j]);
    linear(u, 0.5 * dt);
  }

  void linear(std::vector<cplx>& u, double tau) {
    if (tau != cached_tau_) {
      phases_.resize(grid_.size());
      const double m2 = params_.mass * params_.mass;
      for (std::size_t j = 0; j < grid_.size(); ++j) {
        const double k = grid_.frequency(j);
        phases_[j] = std::polar(1.0, -tau * std::sqrt(k * k + m2));
      }
      cached_tau_ = tau;
    }
    detail::forward_inplace(grid_, u);
    for (std::size_t j = 0; j < u.size(); ++j) u[j] *= phases_[j];
    detail::inverse_inplace(grid_, u);
  }

 private:
  RadialGrid grid_;
  ModelParams params_;
  std::vector<double> v_;
  std::vector<cplx> phases_;
  double cached_tau_ = std::numeric_limits<double>::quiet_NaN();
};

template <class Potential>
Field step(const Field& u, double dt, const ModelParams& p, Potential&& potential) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  SplitStepper stepper(u.grid(), p);
  std::vector<cplx> w = u.values();
  stepper.step(w, dt, potential);
  Field out(u.grid(), std::move(w));
  if (!out.all_finite()) throw NonFinite("non-finite values after step");
  return out;
}

inline Field step(const Field& u, double dt, const ModelParams& p) {
  return step(u, dt, p, CoulombPotential{});
}

namespace detail {

inline StepRecord measure(const Field& u, const ModelParams& p, const EvolutionControls& c,
                          std::vector<double>& v) {
  const auto& g = u.grid();
  StepRecord r;
  const auto coeffs = radial_transform(u);
  double kin = 0.0, k_hom = 0.0, h = 0.0;
  const double m2 = p.mass * p.mass;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double k = g.frequency(j), w = std::norm(coeffs.coefficients[j]);
    kin += std::sqrt(k * k + m2) * w;
    k_hom += k * w;
    h += std::sqrt(1.0 + k * k) * w;
  }
  CoulombPotential{}(g, u.values(), v);
  double d = 0.0;
  r.max_potential = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    d += v[j] * std::norm(u[j]) * g.radius(j) * g.radius(j);
    r.max_potential = std::max(r.max_potential, v[j]);
  }
  d *= 4.0 * std::numbers::pi * g.dr();
  r.mass = mass(u);
  r.kinetic_homogeneous = k_hom;
  r.h_half = std::sqrt(h);
  r.energy = 0.5 * kin - (c.nonlinear ? 0.25 * d : 0.0);
  r.boundary_mass = boundary_mass(u, c.boundary_fraction);
  r.resolved = !(k_hom > 0.0) || r.mass / k_hom > c.unresolved_width_factor * g.dr();
  return r;
}

}  // namespace detail

/// Adaptive Strang integration: dt = min(dt0, cfl / max(‖u‖²_{Ḣ^{1/2}}, max V_u)).
inline Trajectory evolve(const Field& u0, const ModelParams& p, const EvolutionControls& c) {
  c.validate();
  if (p.mass < 0.0) throw ValidationError({"params.mass"});
  if (!u0.all_finite()) throw NonFinite("initial datum is not finite");

  Trajectory traj;
  traj.params = p;
  traj.controls = c;
  const auto& g = u0.grid();
  std::vector<double> v(g.size());

  StepRecord rec = detail::measure(u0, p, c, v);
  traj.records.push_back(rec);
  traj.snapshots.push_back({0, 0.0, rec.resolved, u0});

  SplitStepper stepper(g, p);
  const auto zero_potential = [](const RadialGrid&, const std::vector<cplx>&, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
  };
  std::vector<cplx> u = u0.values();
  double t = 0.0;
  std::size_t n = 0;
  traj.termination = Termination::HorizonReached;

  while (t < c.t_end) {
    double dt = c.dt0;
    if (c.adaptive) {
      const double scale = std::max(rec.kinetic_homogeneous, c.nonlinear ? rec.max_potential : 0.0);
      if (scale > 0.0) dt = std::min(dt, c.cfl / scale);
      if (dt < c.dt_floor) {
        traj.termination = Termination::StepFloor;
        break;
      }
    }
    if (t + dt >= c.t_end || c.t_end - (t + dt) < 1e-12 * c.t_end) dt = c.t_end - t;

    std::vector<cplx> next = u;
    if (c.nonlinear)
      stepper.step(next, dt, CoulombPotential{});
    else
      stepper.step(next, dt, zero_potential);
    Field f(g, std::move(next));
    if (!f.all_finite()) {
      traj.termination = Termination::Diverged;
      traj.message = "non-finite values at t=" + std::to_string(t + dt);
      break;
    }
    ++n;
    t = (dt == c.t_end - t) ? c.t_end : t + dt;
    rec = detail::measure(f, p, c, v);
    rec.step = n;
    rec.t = t;
    rec.dt = dt;
    traj.records.push_back(rec);
    u = f.values();
    const bool cap = rec.h_half > c.h_half_cap;
    if (n % c.snapshot_stride == 0 || t >= c.t_end || cap) traj.snapshots.push_back({n, t, rec.resolved, std::move(f)});
    if (cap) {
      traj.termination = Termination::NormCap;
      break;
    }
  }
  if (traj.snapshots.back().step != n) traj.snapshots.push_back({n, t, rec.resolved, Field(g, u)});

  if (traj.termination == Termination::StepFloor && traj.records.size() > c.monotone_window) {
    bool monotone = true;
    for (std::size_t i = traj.records.size() - c.monotone_window; i < traj.records.size(); ++i)
      monotone = monotone && traj.records[i].h_half >= traj.records[i - 1].h_half;
    traj.blowup_suspected = monotone;
  }
  return traj;
}

/// ‖√(−Δ+m²)u − V_u u‖_{H⁻¹}
inline double h_minus1_rhs_bound(const Field& u, const ModelParams& p) {
  Field w = apply_multiplier(u, symbols::relativistic(p));
  const auto v = coulomb_potential(u);
  for (std::size_t j = 0; j < u.size(); ++j) w[j] -= v[j] * u[j];
  return hs_norm(w, -1.0);
}

}  // namespace bosonstar
