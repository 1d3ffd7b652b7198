#pragma once

#include <cmath>
#include <numbers>

#include "bosonstar/spectral/coulomb.hpp"
#include "bosonstar/spectral/multipliers.hpp"

namespace bosonstar {

/// 4π Σ|f|²r²dr
inline double mass(const Field& f) {
  const auto& g = f.grid();
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += std::norm(f[j]) * g.radius(j) * g.radius(j);
  return 4.0 * std::numbers::pi * g.dr() * acc;
}

/// Mass in r ≥ fraction·r_max.
inline double boundary_mass(const Field& f, double fraction = 0.9) {
  const auto& g = f.grid();
  const double r0 = fraction * g.r_max();
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    if (g.radius(j) >= r0) acc += std::norm(f[j]) * g.radius(j) * g.radius(j);
  return 4.0 * std::numbers::pi * g.dr() * acc;
}

/// ⟨f, √(−Δ+m²) f⟩
inline double kinetic_energy(const Field& f, const ModelParams& p) {
  return quadratic_form(f, symbols::relativistic(p));
}

/// ‖|∇|^{1/2} f‖₂²
inline double homogeneous_kinetic(const Field& f) { return quadratic_form(f, symbols::abs_k()); }

/// E = ½⟨f,√(−Δ+m²)f⟩ − ¼𝒟(|f|²)
inline double energy(const Field& f, const ModelParams& p) {
  return 0.5 * kinetic_energy(f, p) - 0.25 * hartree_energy(f);
}

inline double massless_energy(const Field& f) { return energy(f, ModelParams{0.0}); }

/// ‖(1+k²)^{s/2} f̂‖₂
inline double hs_norm(const Field& f, double s) {
  return std::sqrt(quadratic_form(f, symbols::bessel(2.0 * s)));
}

/// L² inner product ⟨a, b⟩ = 4π Σ conj(a) b r² dr.
inline cplx inner(const Field& a, const Field& b) {
  const auto& g = a.grid();
  cplx acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    acc += std::conj(a[j]) * b[j] * g.radius(j) * g.radius(j);
  return 4.0 * std::numbers::pi * g.dr() * acc;
}

inline double l2_norm(const Field& f) { return std::sqrt(mass(f)); }

/// u_λ(r) = λ^{3/2} u(λ r), sampled by band-limited interpolation in the sine basis.
inline Field rescale(const Field& f, double lambda) {
  const auto c = radial_transform(f);
  const auto& g = f.grid();
  // continuous extension of the inverse transform
  const double pref = 2.0 * detail::inverse_scale(g);
  Field out(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double r = lambda * g.radius(j);
    cplx acc = 0.0;
    if (r < g.dirichlet_radius())
      for (std::size_t k = 0; k < g.size(); ++k) acc += c.coefficients[k] * std::sin(g.frequency(k) * r);
    out[j] = std::pow(lambda, 1.5) * pref * acc / r;
  }
  return out;
}

}  // namespace bosonstar
