#pragma once

#include <algorithm>
#include <cmath>

#include "bosonstar/spectral/functionals.hpp"

namespace bosonstar {

struct Concentration {
  double center = 0.0;  // y₃ of the best center (0,0,y₃)
  double value = 0.0;
};

namespace detail {

/// Fraction of the sphere |x| = r inside the ball B((0,0,a), R).
inline double sphere_fraction_in_ball(double r, double a, double radius) {
  if (r + a <= radius) return 1.0;
  if (std::abs(r - a) >= radius) return 0.0;
  return (radius * radius - (r - a) * (r - a)) / (4.0 * a * r);
}

/// Sphere fraction averaged over the cell [r − dr/2, r + dr/2].
inline double cell_fraction(double r, double dr, double a, double radius) {
  const double lo = std::max(0.0, r - 0.5 * dr), hi = r + 0.5 * dr;
  if (hi + a <= radius) return 1.0;
  if (lo - a >= radius || a - hi >= radius) return 0.0;
  constexpr int sub = 16;
  double acc = 0.0;
  for (int i = 0; i < sub; ++i) acc += sphere_fraction_in_ball(lo + (hi - lo) * (i + 0.5) / sub, a, radius);
  return acc / sub;
}

inline double ball_mass(const Field& u, double a, double radius) {
  const auto& g = u.grid();
  const double dr = g.dr();
  const double lo = std::max(0.0, a - radius), hi = a + radius;
  const std::size_t j0 = lo <= dr ? 0 : static_cast<std::size_t>(std::floor(lo / dr)) - 1;
  double acc = 0.0;
  for (std::size_t j = j0; j < g.size() && g.radius(j) <= hi; ++j)
    acc += cell_fraction(g.radius(j), dr, a, radius) * std::norm(u[j]) * g.radius(j) * g.radius(j);
  return 4.0 * std::numbers::pi * dr * acc;
}

}  // namespace detail

/// sup over axis centers y = i·center_step·dr of ∫_{|x−y|≤R}|u|²; ties go to the smaller |y|.
/// center_step = 0 picks a stride giving at most ~2048 centers.
inline Concentration concentration_function(const Field& u, double radius, std::size_t center_step = 0) {
  const auto& g = u.grid();
  if (radius >= g.r_max()) return {0.0, mass(u)};
  if (center_step == 0) center_step = std::max<std::size_t>(1, g.size() / 2048);
  Concentration best{0.0, detail::ball_mass(u, 0.0, radius)};
  for (std::size_t i = center_step; i <= g.size(); i += center_step) {
    const double a = static_cast<double>(i) * g.dr();
    const double v = detail::ball_mass(u, a, radius);
    if (v > best.value) best = {a, v};
  }
  return best;
}

}  // namespace bosonstar
