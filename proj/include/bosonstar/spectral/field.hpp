#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "bosonstar/spectral/radial_grid.hpp"

namespace bosonstar {

using cplx = std::complex<double>;

/// Complex radial samples u(r_j) on a RadialGrid.
class Field {
 public:
  Field() = default;
  explicit Field(RadialGrid g) : grid_(std::move(g)), values_(grid_.size()) {}
  Field(RadialGrid g, std::vector<cplx> v) : grid_(std::move(g)), values_(std::move(v)) {
    if (values_.size() != grid_.size()) throw InvalidArgument("field length does not match grid");
  }

  template <class F>
  static Field from_function(const RadialGrid& g, F&& f) {
    Field out(g);
    for (std::size_t j = 0; j < g.size(); ++j) out.values_[j] = cplx(f(g.radius(j)));
    return out;
  }

  const RadialGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<cplx>& values() const noexcept { return values_; }
  std::vector<cplx>& values() noexcept { return values_; }
  cplx operator[](std::size_t j) const noexcept { return values_[j]; }
  cplx& operator[](std::size_t j) noexcept { return values_[j]; }

  bool all_finite() const noexcept {
    for (const auto& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  Field& operator*=(cplx a) {
    for (auto& v : values_) v *= a;
    return *this;
  }
  Field& operator+=(const Field& o) {
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
  }
  Field& operator-=(const Field& o) {
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    return *this;
  }
  friend Field operator*(cplx a, Field f) { return f *= a; }
  friend Field operator*(Field f, cplx a) { return f *= a; }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }

  Field conj() const {
    Field out(*this);
    for (auto& v : out.values_) v = std::conj(v);
    return out;
  }

 private:
  RadialGrid grid_;
  std::vector<cplx> values_;
};

/// Coefficients on the frequencies k_j; plain Euclidean sums give the L² norm.
struct SpectralField {
  RadialGrid grid;
  std::vector<cplx> coefficients;
};

}  // namespace bosonstar
