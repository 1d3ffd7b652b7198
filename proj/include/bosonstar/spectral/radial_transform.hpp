#pragma once

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "bosonstar/spectral/field.hpp"

namespace bosonstar {
namespace detail {

enum class PlanKind { SineComplex, SineReal, CosineComplex };

/// FFTW plans are made once per (kind, n) and reused; execution goes through the
/// new-array interface, which is safe to call concurrently.
inline fftw_plan cached_plan(PlanKind kind, std::size_t n) {
  static std::mutex mutex;
  static std::map<std::pair<int, std::size_t>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(static_cast<int>(kind), n);
  if (auto it = plans.find(key); it != plans.end()) return it->second;

  const int len = static_cast<int>(n);
  const fftw_r2r_kind r2r = kind == PlanKind::CosineComplex ? FFTW_REDFT00 : FFTW_RODFT00;
  const int howmany = kind == PlanKind::SineReal ? 1 : 2;
  std::vector<double> scratch(n * static_cast<std::size_t>(howmany));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan p = fftw_plan_many_r2r(1, &len, howmany, scratch.data(), nullptr, howmany, 1,
                                   scratch.data(), nullptr, howmany, 1, &r2r, flags);
  plans.emplace(key, p);
  return p;
}

/// Unnormalized in-place DST-I: y_k = 2 Σ_j x_j sin(π(j+1)(k+1)/(n+1)).
inline void dst1_inplace(cplx* data, std::size_t n) {
  auto* d = reinterpret_cast<double*>(data);
  fftw_execute_r2r(cached_plan(PlanKind::SineComplex, n), d, d);
}

inline void dst1_inplace(double* data, std::size_t n) {
  fftw_execute_r2r(cached_plan(PlanKind::SineReal, n), data, data);
}

/// Unnormalized in-place DCT-I on n points.
inline void dct1_inplace(cplx* data, std::size_t n) {
  auto* d = reinterpret_cast<double*>(data);
  fftw_execute_r2r(cached_plan(PlanKind::CosineComplex, n), d, d);
}

inline double forward_scale(const RadialGrid& g) {
  return std::sqrt(4.0 * std::numbers::pi * g.dr() / (2.0 * static_cast<double>(g.size() + 1)));
}

inline double inverse_scale(const RadialGrid& g) {
  return 1.0 / std::sqrt(4.0 * std::numbers::pi * g.dr() * 2.0 * static_cast<double>(g.size() + 1));
}

/// values (physical samples) -> coefficients, in place.
inline void forward_inplace(const RadialGrid& g, std::vector<cplx>& v) {
  const double s = forward_scale(g);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] *= s * g.radius(j);
  dst1_inplace(v.data(), v.size());
}

/// coefficients -> physical samples, in place.
inline void inverse_inplace(const RadialGrid& g, std::vector<cplx>& v) {
  dst1_inplace(v.data(), v.size());
  const double s = inverse_scale(g);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] *= s / g.radius(j);
}

}  // namespace detail

inline SpectralField radial_transform(const Field& f) {
  SpectralField out{f.grid(), f.values()};
  detail::forward_inplace(f.grid(), out.coefficients);
  return out;
}

inline Field inverse_radial_transform(const SpectralField& c) {
  std::vector<cplx> v = c.coefficients;
  detail::inverse_inplace(c.grid, v);
  return Field(c.grid, std::move(v));
}

}  // namespace bosonstar
