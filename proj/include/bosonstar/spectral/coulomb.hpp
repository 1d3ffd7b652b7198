#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "bosonstar/spectral/field.hpp"

namespace bosonstar {

inline std::vector<double> density(const Field& f) {
  std::vector<double> rho(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) rho[j] = std::norm(f[j]);
  return rho;
}

/// Newton form of |x|⁻¹∗ρ for a radial density:
///   V(r) = 4π[(1/r)∫₀^r ρ s² ds + ∫_r^∞ ρ s ds].
/// Both integrals are cumulative trapezoid sums; the leading Euler–Maclaurin
/// term of the kink at s = r, (π dr²/3)ρ(r), is removed, leaving O(dr⁴).
/// The discrete kernel is symmetric and r·V(r) never exceeds the discrete mass.
inline void coulomb_potential_of_density(const RadialGrid& g, std::span<const double> rho,
                                         std::span<double> out) {
  const std::size_t n = g.size();
  const double dr = g.dr();
  constexpr double four_pi = 4.0 * std::numbers::pi;
  const double correction = std::numbers::pi * dr * dr / 3.0;

  double outer = 0.0;  // Σ_{j>i} ρ_j r_j
  for (std::size_t i = n; i-- > 0;) {
    out[i] = outer;
    outer += rho[i] * g.radius(i);
  }
  double inner = 0.0;  // Σ_{j<i} ρ_j r_j²
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.radius(i);
    const double own = rho[i] * r * r;
    const double i_in = dr * (inner + 0.5 * own);
    const double i_out = dr * (out[i] + 0.5 * rho[i] * r);
    out[i] = four_pi * (i_in / r + i_out) - correction * rho[i];
    inner += own;
  }
}

inline std::vector<double> coulomb_potential_of_density(const RadialGrid& g,
                                                        std::span<const double> rho) {
  std::vector<double> v(g.size());
  coulomb_potential_of_density(g, rho, v);
  return v;
}

/// V_f = |x|⁻¹∗|f|², real and nonnegative.
inline std::vector<double> coulomb_potential(const Field& f) {
  const auto rho = density(f);
  return coulomb_potential_of_density(f.grid(), rho);
}

/// 𝒟(ρ₁,ρ₂) = 4π∫(|x|⁻¹∗ρ₁)ρ₂.
inline double hartree_form(const RadialGrid& g, std::span<const double> rho1,
                           std::span<const double> rho2) {
  const auto v = coulomb_potential_of_density(g, rho1);
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) acc += v[j] * rho2[j] * g.radius(j) * g.radius(j);
  return 4.0 * std::numbers::pi * g.dr() * acc;
}

/// 𝒟(|f|²)
inline double hartree_energy(const Field& f) {
  const auto rho = density(f);
  return hartree_form(f.grid(), rho, rho);
}

}  // namespace bosonstar
