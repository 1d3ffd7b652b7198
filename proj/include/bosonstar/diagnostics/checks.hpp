#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "bosonstar/diagnostics/concentration.hpp"
#include "bosonstar/diagnostics/cutoff.hpp"
#include "bosonstar/diagnostics/record.hpp"
#include "bosonstar/diagnostics/virial.hpp"
#include "bosonstar/evolution.hpp"
#include "bosonstar/ground_state.hpp"

namespace bosonstar {

namespace detail {

inline std::vector<const Snapshot*> last_resolved(const Trajectory& traj, std::size_t k) {
  auto res = traj.resolved_snapshots();
  if (res.size() < k) throw InsufficientSnapshots(res.size(), k);
  return {res.end() - static_cast<std::ptrdiff_t>(k), res.end()};
}

/// Mass in r ≥ r_j for every j.
inline std::vector<double> exterior_mass_profile(const Field& u) {
  const auto& g = u.grid();
  std::vector<double> out(g.size());
  double acc = 0.0;
  const double w = 4.0 * std::numbers::pi * g.dr();
  for (std::size_t j = g.size(); j-- > 0;) {
    acc += w * std::norm(u[j]) * g.radius(j) * g.radius(j);
    out[j] = acc;
  }
  return out;
}

inline double exterior_distance(const Field& a, const Field& b, double radius) {
  const auto& g = a.grid();
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    if (g.radius(j) >= radius) acc += std::norm(a[j] - b[j]) * g.radius(j) * g.radius(j);
  return std::sqrt(4.0 * std::numbers::pi * g.dr() * acc);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Propagation of localized mass

struct PropagationResult {
  CheckRecord record;
  double max_rate = 0.0;  // max |ΔM_χ/Δt|
  std::vector<double> times;
  std::vector<double> localized;
};

/// C_hat = max|ΔM_χ/Δt| / ‖∇χ‖_∞ against C_cal = κ·mass(u₀).
/// Constant χ is checked against mass conservation instead.
inline PropagationResult propagation_bound_check(const Trajectory& traj, const Cutoff& chi, double kappa) {
  if (traj.snapshots.size() < 3) throw InsufficientSnapshots(traj.snapshots.size(), 3);
  PropagationResult out;
  for (const auto& s : traj.snapshots) {
    out.times.push_back(s.t);
    out.localized.push_back(localized_mass(s.u, chi));
  }
  for (std::size_t i = 1; i < out.times.size(); ++i) {
    const double dt = out.times[i] - out.times[i - 1];
    out.max_rate = std::max(out.max_rate, std::abs(out.localized[i] - out.localized[i - 1]) / dt);
  }
  auto& r = out.record;
  r.check = "propagation_bound";
  r.params = {{"kappa", kappa}, {"grad_inf", chi.grad_inf}, {"radius", chi.radius}};
  r.note = chi.label;
  if (chi.grad_inf > 0.0) {
    r.statistic = out.max_rate / chi.grad_inf;
    r.bound = kappa * traj.initial_mass();
  } else {
    r.statistic = out.max_rate;
    r.bound = 1e-9;
  }
  r.pass = r.statistic <= r.bound;
  return out;
}

// ---------------------------------------------------------------------------
// Tightness

/// Smallest grid radius R with sup over snapshots of ∫_{r≥R}|u|² ≤ eps.
inline double tightness_radius(const std::vector<const Snapshot*>& snaps, double eps) {
  const auto& g = snaps.front()->u.grid();
  std::vector<double> sup(g.size(), 0.0);
  for (const auto* s : snaps) {
    const auto ext = detail::exterior_mass_profile(s->u);
    for (std::size_t j = 0; j < g.size(); ++j) sup[j] = std::max(sup[j], ext[j]);
  }
  for (std::size_t j = 0; j < g.size(); ++j)
    if (sup[j] <= eps) return g.radius(j);
  throw NotTightOnGrid("no radius below r_max keeps the exterior mass under eps");
}

inline double tightness_check(const Trajectory& traj, double eps) {
  std::vector<const Snapshot*> all;
  for (const auto& s : traj.snapshots) all.push_back(&s);
  return tightness_radius(all, eps);
}

/// R_star over the tail windows [t_k, T): one value per snapshot start.
inline std::vector<double> tightness_tail_profile(const Trajectory& traj, double eps) {
  std::vector<double> out;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    std::vector<const Snapshot*> tail;
    for (std::size_t i = k; i < traj.snapshots.size(); ++i) tail.push_back(&traj.snapshots[i]);
    out.push_back(tightness_radius(tail, eps));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimal mass concentration

struct ConcentrationSample {
  double t = 0.0;
  double center = 0.0;
  double value = 0.0;
  double radius = 0.0;  // λ(t)
};

struct ConcentrationResult {
  CheckRecord record;
  std::vector<ConcentrationSample> trace;
};

/// λ(t) = ‖u(t)‖_{Ḣ^{1/2}}^{-1}; min over the final resolved snapshots of the λ-ball mass.
inline ConcentrationResult minimal_concentration_check(const Trajectory& traj, const GroundState& gs,
                                                       const DiagnosticTolerances& tol = {}) {
  ConcentrationResult out;
  auto& r = out.record;
  r.check = "minimal_concentration";
  r.params = {{"fraction", tol.concentration_fraction}, {"critical_mass", gs.critical_mass}};
  r.bound = tol.concentration_fraction * gs.critical_mass;
  if (traj.termination != Termination::StepFloor) {
    r.applicable = false;
    r.pass = true;
    r.note = "not applicable: run did not end at the step floor";
    return out;
  }
  const auto snaps = detail::last_resolved(traj, tol.final_window);
  const double dr = snaps.front()->u.grid().dr();
  double min_value = std::numeric_limits<double>::infinity(), max_center = 0.0;
  for (const auto* s : snaps) {
    const double lambda = 1.0 / std::sqrt(homogeneous_kinetic(s->u));
    const auto c = concentration_function(s->u, lambda, 1);
    out.trace.push_back({s->t, c.center, c.value, lambda});
    min_value = std::min(min_value, c.value);
    max_center = std::max(max_center, c.center);
  }
  r.statistic = min_value;
  r.params["max_center"] = max_center;
  r.params["center_bound"] = tol.concentration_center_drs * dr;
  r.pass = min_value >= r.bound && max_center <= tol.concentration_center_drs * dr;
  return out;
}

// ---------------------------------------------------------------------------
// Blowup measure

struct Histogram {
  double t = 0.0;
  std::vector<double> edges;
  std::vector<double> masses;
};

struct BlowupMeasureResult {
  std::vector<Histogram> histograms;
  std::vector<CheckRecord> cauchy;
  double max_histogram_error = 0.0;  // relative to mass(u₀)
};

inline Histogram radial_histogram(const Field& u, std::size_t bins, double t = 0.0) {
  const auto& g = u.grid();
  Histogram h;
  h.t = t;
  const double top = (static_cast<double>(g.size()) + 0.5) * g.dr();
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(top * static_cast<double>(b) / static_cast<double>(bins));
  h.masses.assign(bins, 0.0);
  const double w = 4.0 * std::numbers::pi * g.dr();
  for (std::size_t j = 0; j < g.size(); ++j) {
    auto b = static_cast<std::size_t>(g.radius(j) / top * static_cast<double>(bins));
    h.masses[std::min(b, bins - 1)] += w * std::norm(u[j]) * g.radius(j) * g.radius(j);
  }
  return h;
}

/// Histograms of |u|² per snapshot plus, for each bank cutoff, the oscillation of M_χ over the
/// final snapshot window against C_cal·‖∇χ‖_∞·(window length) + floor.
inline BlowupMeasureResult blowup_measure(const Trajectory& traj, std::size_t bins, double kappa,
                                          const DiagnosticTolerances& tol = {}) {
  BlowupMeasureResult out;
  const double m0 = traj.initial_mass();
  for (const auto& s : traj.snapshots) {
    out.histograms.push_back(radial_histogram(s.u, bins, s.t));
    double total = 0.0;
    for (double x : out.histograms.back().masses) total += x;
    out.max_histogram_error = std::max(out.max_histogram_error, std::abs(total - m0) / m0);
  }
  const std::size_t k = std::min(tol.final_window, traj.snapshots.size());
  const auto first = traj.snapshots.end() - static_cast<std::ptrdiff_t>(k);
  const double window = traj.snapshots.back().t - first->t;
  for (const auto& chi : cutoff_bank(traj.snapshots.front().u.grid())) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (auto it = first; it != traj.snapshots.end(); ++it) {
      const double m = localized_mass(it->u, chi);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    CheckRecord r;
    r.check = "cauchy_oscillation";
    r.note = chi.label;
    r.params = {{"radius", chi.radius}, {"grad_inf", chi.grad_inf}, {"window", window}, {"kappa", kappa}};
    r.statistic = hi - lo;
    r.bound = kappa * m0 * chi.grad_inf * window + tol.cauchy_floor;
    r.pass = r.statistic <= r.bound;
    out.cauchy.push_back(std::move(r));
  }
  return out;
}

/// Oscillation of M_χ over [t_k, T) for each snapshot start k (nonincreasing in k).
inline std::vector<double> tail_oscillations(const Trajectory& traj, const Cutoff& chi) {
  std::vector<double> m;
  for (const auto& s : traj.snapshots) m.push_back(localized_mass(s.u, chi));
  std::vector<double> out(m.size());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = m.size(); i-- > 0;) {
    lo = std::min(lo, m[i]);
    hi = std::max(hi, m[i]);
    out[i] = hi - lo;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exterior convergence

struct ExteriorIngredients {
  double t = 0.0;
  double commutator_norm = 0.0;        // ‖[ζ_R, √(−Δ+m²)]u‖₂
  double commutator_scale = 0.0;       // ‖∇ζ_R‖_∞ ‖u‖₂
  double potential_term = 0.0;         // ‖V_u u_R‖₂
  double potential_term_bound = 0.0;   // 2 mass²/R
  double potential_sup = 0.0;          // ‖V_u ζ_{R/2}‖_∞
  double potential_sup_bound = 0.0;    // 2 mass/R
};

struct ExteriorResult {
  CheckRecord record;
  std::vector<double> distances;
  std::vector<ExteriorIngredients> ingredients;
};

inline ExteriorIngredients exterior_ingredients(const Field& u, const ModelParams& p, double radius, double m0) {
  const auto& g = u.grid();
  const Cutoff zeta = compact_exterior(g, radius);
  const Cutoff zeta_half = compact_exterior(g, 0.5 * radius);
  const auto omega = symbols::relativistic(p);

  Field u_r(g);
  for (std::size_t j = 0; j < g.size(); ++j) u_r[j] = zeta.samples[j] * u[j];
  Field f = apply_multiplier(u, omega);
  for (std::size_t j = 0; j < g.size(); ++j) f[j] *= zeta.samples[j];
  f -= apply_multiplier(u_r, omega);

  const auto v = coulomb_potential(u);
  Field vu(g);
  double sup = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    vu[j] = v[j] * u_r[j];
    sup = std::max(sup, v[j] * zeta_half.samples[j]);
  }
  ExteriorIngredients e;
  e.commutator_norm = l2_norm(f);
  e.commutator_scale = zeta.grad_inf * std::sqrt(m0);
  e.potential_term = l2_norm(vu);
  e.potential_term_bound = 2.0 * m0 * m0 / radius;
  e.potential_sup = sup;
  e.potential_sup_bound = 2.0 * m0 / radius;
  return e;
}

/// Consecutive L²(r ≥ R) distances between the last k resolved snapshots.
inline ExteriorResult exterior_convergence_check(const Trajectory& traj, double radius,
                                                 const DiagnosticTolerances& tol = {}) {
  const auto snaps = detail::last_resolved(traj, tol.final_window);
  ExteriorResult out;
  const double m0 = traj.initial_mass();
  for (std::size_t i = 1; i < snaps.size(); ++i)
    out.distances.push_back(detail::exterior_distance(snaps[i]->u, snaps[i - 1]->u, radius));
  bool decreasing = true;
  for (std::size_t i = 1; i < out.distances.size(); ++i) decreasing = decreasing && out.distances[i] < out.distances[i - 1];
  for (const auto* s : snaps) {
    auto e = exterior_ingredients(s->u, traj.params, radius, m0);
    e.t = s->t;
    out.ingredients.push_back(e);
  }
  auto& r = out.record;
  r.check = "exterior_convergence";
  r.params = {{"radius", radius}, {"fraction", tol.exterior_fraction}, {"decreasing", decreasing ? 1.0 : 0.0}};
  r.statistic = out.distances.back();
  r.bound = tol.exterior_fraction * std::sqrt(m0);
  r.pass = decreasing && r.statistic < r.bound;
  return out;
}

/// max_r r·V_u(r) over every snapshot against mass(u₀)(1+slack).
inline CheckRecord newton_bound_check(const Trajectory& traj, const DiagnosticTolerances& tol = {}) {
  CheckRecord r;
  r.check = "newton_bound";
  const double m0 = traj.initial_mass();
  for (const auto& s : traj.snapshots) {
    const auto v = coulomb_potential(s.u);
    for (std::size_t j = 0; j < v.size(); ++j) r.statistic = std::max(r.statistic, s.u.grid().radius(j) * v[j]);
  }
  r.bound = m0 * (1.0 + tol.newton_slack);
  r.params = {{"slack", tol.newton_slack}};
  r.pass = r.statistic <= r.bound;
  return r;
}

// ---------------------------------------------------------------------------
// Virial

struct VirialResult {
  CheckRecord record;
  std::vector<double> times;
  std::vector<double> weights;
  double a = 0.0, b = 0.0, c = 0.0;  // W ≈ a t² + b t + c
  double fit_residual = 0.0;
};

/// Quadratic fit of W(t) over resolved snapshots; leading coefficient against 2E[u₀](1+envelope).
inline VirialResult virial_check(const Trajectory& traj, const ModelParams& p, const DiagnosticTolerances& tol = {}) {
  const auto snaps = traj.resolved_snapshots();
  if (snaps.size() < 3) throw InsufficientSnapshots(snaps.size(), 3);
  VirialResult out;
  for (const auto* s : snaps) {
    const double w = virial_weight(s->u, p);
    if (w < 0.0) throw NegativeWeight("virial weight is negative at t=" + std::to_string(s->t));
    out.times.push_back(s->t);
    out.weights.push_back(w);
  }
  const auto n = static_cast<Eigen::Index>(out.times.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = out.times[static_cast<std::size_t>(i)];
    a(i, 0) = t * t;
    a(i, 1) = t;
    a(i, 2) = 1.0;
    y(i) = out.weights[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(y);
  out.a = coef(0);
  out.b = coef(1);
  out.c = coef(2);
  out.fit_residual = (a * coef - y).norm() / y.norm();

  const double e0 = traj.initial_energy();
  auto& r = out.record;
  r.check = "virial_envelope";
  r.params = {{"energy0", e0}, {"envelope", tol.virial_envelope}, {"fit_residual", out.fit_residual},
              {"c1", out.b}, {"c2", out.c}};
  r.statistic = out.a;
  r.bound = 2.0 * e0 * (1.0 + tol.virial_envelope);
  r.pass = out.a <= r.bound && out.fit_residual < tol.virial_fit_residual;
  return out;
}

}  // namespace bosonstar
