#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bosonstar/spectral/functionals.hpp"

namespace bosonstar {

struct GroundStateControls {
  double tol = 1e-10;
  std::size_t max_iter = 500;
  double gamma = 1.5;
};

struct GroundState {
  Field q;
  double critical_mass = 0.0;
  double c_opt = 0.0;
  double pohozaev_residual = 0.0;
  double equation_residual = 0.0;
  std::size_t iterations = 0;
  double final_update_norm = 0.0;
  double last_stabilizer = 0.0;  // S of the final iteration
  std::vector<double> update_history;
};

enum class SeedProfile { Gaussian, Sech };

inline Field make_seed(const RadialGrid& g, SeedProfile p) {
  if (p == SeedProfile::Gaussian) return Field::from_function(g, [](double r) { return std::exp(-r * r / 2); });
  return Field::from_function(g, [](double r) { return 1.0 / std::cosh(r); });
}

/// ‖√(−Δ)Q + Q − V_Q Q‖₂ / ‖Q‖₂
inline double ground_state_equation_residual(const Field& q) {
  Field lhs = apply_multiplier(q, [](double k) { return k + 1.0; });
  const auto v = coulomb_potential(q);
  for (std::size_t j = 0; j < q.size(); ++j) lhs[j] -= v[j] * q[j];
  return l2_norm(lhs) / l2_norm(q);
}

/// |2‖|∇|^{1/2}Q‖² − 𝒟(|Q|²)| / 𝒟(|Q|²)
inline double pohozaev_residual(const Field& q) {
  const double d = hartree_energy(q);
  return std::abs(2.0 * homogeneous_kinetic(q) - d) / d;
}

/// Petviashvili iteration Q ← S^γ (|∇|+1)⁻¹(V_Q Q), S = ⟨Q,(|∇|+1)Q⟩/⟨Q,V_Q Q⟩.
inline GroundState solve_ground_state(const RadialGrid& g, const GroundStateControls& c, Field seed) {
  if (!(c.tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (c.max_iter == 0) throw InvalidArgument("max_iter must be positive");
  if (!(seed.grid() == g)) throw InvalidArgument("seed lives on a different grid");
  if (mass(seed) == 0.0) throw ZeroField();

  const auto shifted = [](double k) { return k + 1.0; };
  const auto h_half_symbol = [](double k) { return std::sqrt(1.0 + k * k); };

  GroundState out;
  Field q = std::move(seed);
  for (std::size_t it = 1; it <= c.max_iter; ++it) {
    const auto v = coulomb_potential(q);
    Field nonlinear(g);
    for (std::size_t j = 0; j < g.size(); ++j) nonlinear[j] = v[j] * q[j];

    auto cq = radial_transform(q);
    const double num = quadratic_form(cq, shifted);
    const double den = inner(q, nonlinear).real();
    const double s = num / den;

    auto cn = radial_transform(nonlinear);
    const double scale = std::pow(s, c.gamma);
    for (std::size_t j = 0; j < g.size(); ++j) cn.coefficients[j] *= scale / (g.frequency(j) + 1.0);

    SpectralField diff{g, cn.coefficients};
    for (std::size_t j = 0; j < g.size(); ++j) diff.coefficients[j] -= cq.coefficients[j];
    const double qnorm = std::sqrt(quadratic_form(cq, h_half_symbol));
    const double update = std::sqrt(quadratic_form(diff, h_half_symbol)) / qnorm;
    const double new_norm = std::sqrt(quadratic_form(cn, h_half_symbol));

    if (!std::isfinite(update) || !std::isfinite(new_norm) || new_norm > 1e12 || !(s > 0.0))
      throw DivergentIterate("ground-state iterate diverged at iteration " + std::to_string(it),
                             out.update_history.size());

    q = inverse_radial_transform(cn);
    for (auto& x : q.values()) x = x.real();
    out.update_history.push_back(update);
    out.last_stabilizer = s;
    out.iterations = it;
    out.final_update_norm = update;
    if (update < c.tol) break;
    if (it == c.max_iter)
      throw NonConvergence("ground-state iteration did not reach tol", out.update_history.size());
  }

  out.critical_mass = mass(q);
  out.c_opt = 2.0 / out.critical_mass;
  out.pohozaev_residual = pohozaev_residual(q);
  out.equation_residual = ground_state_equation_residual(q);
  out.q = std::move(q);
  return out;
}

inline GroundState solve_ground_state(const RadialGrid& g, const GroundStateControls& c = {}) {
  return solve_ground_state(g, c, make_seed(g, SeedProfile::Gaussian));
}

/// 𝒟(|f|²) / (‖|∇|^{1/2}f‖₂² ‖f‖₂²)
inline double gn_ratio(const Field& f) {
  const double m = mass(f);
  if (m == 0.0) throw ZeroField();
  return hartree_energy(f) / (homogeneous_kinetic(f) * m);
}

struct ThresholdReport {
  double energy = 0.0;
  double mass = 0.0;
  double homogeneous_kinetic = 0.0;
  double lower_bound = 0.0;  // ½(1 − M/M_c)‖|∇|^{1/2}f‖²
  double slack = 0.0;        // energy − lower_bound
  bool pass = true;
};

/// E[f] ≥ ½(1 − M[f]/M_c)‖|∇|^{1/2}f‖₂².
inline ThresholdReport energy_threshold_check(const Field& f, const GroundState& gs, const ModelParams& p,
                                              double tol = 1e-8) {
  ThresholdReport r;
  r.energy = energy(f, p);
  r.mass = mass(f);
  r.homogeneous_kinetic = homogeneous_kinetic(f);
  r.lower_bound = 0.5 * (1.0 - r.mass / gs.critical_mass) * r.homogeneous_kinetic;
  r.slack = r.energy - r.lower_bound;
  r.pass = r.slack >= -tol * (1.0 + std::abs(r.energy));
  return r;
}

}  // namespace bosonstar
