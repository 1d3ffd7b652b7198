#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "bosonstar/spectral/radial_transform.hpp"

namespace bosonstar {

/// W = Σ_j ⟨x_j u, ω(|∇|) x_j u⟩ = ∫ ω(k)|∇_k û|² d³k for radial u.
///
/// With û(k) = √(2/π) S(k)/k, S(k) = ∫ r u sin(kr) dr and G(k) = ∫ r² u cos(kr) dr,
/// ∂_k û = √(2/π)(G/k − S/k²). S and G at k_j come from a DST-I and a DCT-I.
template <class Omega>
double weighted_moment(const Field& u, Omega&& omega) {
  const auto& g = u.grid();
  const std::size_t n = g.size();
  const double dr = g.dr();

  std::vector<cplx> s(n);
  std::vector<cplx> c(n + 2, cplx(0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.radius(i);
    s[i] = r * u[i];
    c[i + 1] = r * r * u[i];
  }
  detail::dst1_inplace(s.data(), n);
  detail::dct1_inplace(c.data(), n + 2);

  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double k = g.frequency(j);
    const cplx sj = 0.5 * dr * s[j];
    const cplx gj = 0.5 * dr * c[j + 1];
    acc += static_cast<double>(omega(k)) * std::norm(gj - sj / k);
  }
  return 4.0 * std::numbers::pi * g.dk() * (2.0 / std::numbers::pi) * acc;
}

inline double virial_weight(const Field& u, const ModelParams& p) {
  return weighted_moment(u, [m = p.mass](double k) { return std::sqrt(k * k + m * m); });
}

}  // namespace bosonstar
