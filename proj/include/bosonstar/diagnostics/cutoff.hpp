#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "bosonstar/spectral/functionals.hpp"

namespace bosonstar {

/// Radial cutoff χ sampled on a grid, with ‖∇χ‖_∞.
struct Cutoff {
  enum class Kind { SmoothBump, SmoothExterior, Custom };
  Kind kind = Kind::Custom;
  double radius = 0.0;
  std::vector<double> samples;
  double grad_inf = 0.0;
  std::string label;
};

namespace detail {

inline std::string radius_label(const char* prefix, double radius) {
  std::ostringstream os;
  os << prefix << radius;
  return os.str();
}

/// ½(1 − tanh((r − 3R/4)/(R/8))): ≈1 on r ≤ R/2, ≈0 on r ≥ R, slope 4/R at r = 3R/4.
inline double tanh_bump(double r, double radius) {
  return 0.5 * (1.0 - std::tanh((r - 0.75 * radius) / (0.125 * radius)));
}

/// C^∞ step: 0 for x ≤ 0, 1 for x ≥ 1.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

inline double finite_difference_grad(const RadialGrid& g, const std::vector<double>& s) {
  double m = 0.0;
  for (std::size_t j = 1; j < s.size(); ++j) m = std::max(m, std::abs(s[j] - s[j - 1]) / g.dr());
  return m;
}

}  // namespace detail

inline Cutoff smooth_bump(const RadialGrid& g, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("cutoff radius must be positive");
  Cutoff c{Cutoff::Kind::SmoothBump, radius, std::vector<double>(g.size()), 4.0 / radius,
           detail::radius_label("bump_R", radius)};
  for (std::size_t j = 0; j < g.size(); ++j) c.samples[j] = detail::tanh_bump(g.radius(j), radius);
  return c;
}

inline Cutoff smooth_exterior(const RadialGrid& g, double radius) {
  Cutoff c = smooth_bump(g, radius);
  c.kind = Cutoff::Kind::SmoothExterior;
  c.label = detail::radius_label("exterior_R", radius);
  for (auto& x : c.samples) x = 1.0 - x;
  return c;
}

/// Custom samples; ‖∇χ‖_∞ estimated by first differences.
inline Cutoff custom_cutoff(const RadialGrid& g, std::vector<double> samples, std::string label = "custom") {
  if (samples.size() != g.size()) throw InvalidArgument("cutoff length does not match grid");
  for (double x : samples)
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("cutoff values must lie in [0,1]");
  const double grad = detail::finite_difference_grad(g, samples);
  return Cutoff{Cutoff::Kind::Custom, 0.0, std::move(samples), grad, std::move(label)};
}

inline Cutoff constant_cutoff(const RadialGrid& g, double value = 1.0) {
  return custom_cutoff(g, std::vector<double>(g.size(), value), "constant");
}

/// ζ_R: 0 on r ≤ R, 1 on r ≥ 2R, C^∞ in between.
inline Cutoff compact_exterior(const RadialGrid& g, double radius) {
  std::vector<double> s(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) s[j] = detail::smooth_step(g.radius(j) / radius - 1.0);
  Cutoff c = custom_cutoff(g, std::move(s), detail::radius_label("zeta_R", radius));
  c.radius = radius;
  c.grad_inf = 2.0 / radius;  // max of (smooth_step)' is 2 at x = ½
  return c;
}

inline const std::vector<double>& cutoff_bank_radii() {
  static const std::vector<double> radii{2.0, 4.0, 8.0, 16.0};
  return radii;
}

/// Four bumps and their four complements.
inline std::vector<Cutoff> cutoff_bank(const RadialGrid& g) {
  std::vector<Cutoff> bank;
  for (double radius : cutoff_bank_radii()) bank.push_back(smooth_bump(g, radius));
  for (double radius : cutoff_bank_radii()) bank.push_back(smooth_exterior(g, radius));
  return bank;
}

/// 4π Σ χ|u|²r²dr
inline double localized_mass(const Field& u, const Cutoff& chi) {
  const auto& g = u.grid();
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += chi.samples[j] * std::norm(u[j]) * g.radius(j) * g.radius(j);
  return 4.0 * std::numbers::pi * g.dr() * acc;
}

}  // namespace bosonstar
