#pragma once

#include <cmath>
#include <concepts>
#include <type_traits>

#include "bosonstar/spectral/radial_transform.hpp"

namespace bosonstar {

/// Radial Fourier multipliers. Each factory returns a callable k -> symbol(k).
namespace symbols {

inline auto identity() {
  return [](double) { return 1.0; };
}

/// √(k²+m²)
inline auto relativistic(const ModelParams& p) {
  return [m = p.mass](double k) { return std::sqrt(k * k + m * m); };
}

/// |k|
inline auto abs_k() {
  return [](double k) { return std::abs(k); };
}

/// (1+k²)^{s/2}
inline auto bessel(double s) {
  return [s](double k) { return std::pow(1.0 + k * k, 0.5 * s); };
}

/// (a+k²)^{-1}
inline auto resolvent(double a) {
  return [a](double k) { return 1.0 / (a + k * k); };
}

/// e^{-it√(k²+m²)}
inline auto propagator(double t, const ModelParams& p) {
  return [t, m = p.mass](double k) { return std::polar(1.0, -t * std::sqrt(k * k + m * m)); };
}

}  // namespace symbols

template <class S>
concept RadialSymbol = requires(S s, double k) {
  { s(k) } -> std::convertible_to<cplx>;
};

/// Applies symbol(k_j) to coefficient j in place.
template <RadialSymbol S>
void apply_symbol_inplace(const RadialGrid& g, std::vector<cplx>& coefficients, S&& symbol) {
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    const cplx s = symbol(g.frequency(j));
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw InvalidArgument("multiplier symbol is not finite on the grid");
    coefficients[j] *= s;
  }
}

template <RadialSymbol S>
Field apply_multiplier(const Field& f, S&& symbol) {
  auto c = radial_transform(f);
  apply_symbol_inplace(f.grid(), c.coefficients, symbol);
  return inverse_radial_transform(c);
}

/// Overload for symbols parametrised by the model, called as symbol(k, params).
template <class S>
  requires std::invocable<S, double, const ModelParams&>
Field apply_multiplier(const Field& f, S&& symbol, const ModelParams& p) {
  return apply_multiplier(f, [&](double k) { return cplx(symbol(k, p)); });
}

/// Σ_j symbol(k_j)|c_j|², the quadratic form ⟨f, symbol(|∇|) f⟩ for real symbols.
template <class S>
double quadratic_form(const SpectralField& c, S&& symbol) {
  double acc = 0.0;
  for (std::size_t j = 0; j < c.coefficients.size(); ++j)
    acc += static_cast<double>(symbol(c.grid.frequency(j))) * std::norm(c.coefficients[j]);
  return acc;
}

template <class S>
double quadratic_form(const Field& f, S&& symbol) {
  return quadratic_form(radial_transform(f), std::forward<S>(symbol));
}

}  // namespace bosonstar
