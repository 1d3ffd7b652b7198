#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

#include "bosonstar/errors.hpp"

namespace bosonstar {

/// Uniform radial mesh r_j = j*dr, j = 1..n, with the Dirichlet node at (n+1)*dr.
///
/// Copies share the sample tables.
class RadialGrid {
 public:
  RadialGrid() = default;

  RadialGrid(std::size_t n_points, double r_max) {
    if (n_points < 2) throw InvalidArgument("grid needs at least 2 points");
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw InvalidArgument("r_max must be positive");
    auto t = std::make_shared<Tables>();
    t->n = n_points;
    t->r_max = r_max;
    t->dr = r_max / static_cast<double>(n_points);
    t->r.resize(n_points);
    t->k.resize(n_points);
    const double period = static_cast<double>(n_points + 1) * t->dr;
    for (std::size_t j = 0; j < n_points; ++j) {
      t->r[j] = static_cast<double>(j + 1) * t->dr;
      t->k[j] = static_cast<double>(j + 1) * std::numbers::pi / period;
    }
    tables_ = std::move(t);
  }

  std::size_t size() const noexcept { return tables_ ? tables_->n : 0; }
  double r_max() const noexcept { return tables_->r_max; }
  double dr() const noexcept { return tables_->dr; }
  double dirichlet_radius() const noexcept { return static_cast<double>(size() + 1) * dr(); }
  double dk() const noexcept { return std::numbers::pi / dirichlet_radius(); }

  double radius(std::size_t j) const noexcept { return tables_->r[j]; }
  double frequency(std::size_t j) const noexcept { return tables_->k[j]; }
  const std::vector<double>& radii() const noexcept { return tables_->r; }
  const std::vector<double>& frequencies() const noexcept { return tables_->k; }

  bool valid() const noexcept { return static_cast<bool>(tables_); }

  friend bool operator==(const RadialGrid& a, const RadialGrid& b) noexcept {
    if (a.tables_ == b.tables_) return true;
    if (!a.tables_ || !b.tables_) return false;
    return a.size() == b.size() && a.r_max() == b.r_max();
  }

 private:
  struct Tables {
    std::size_t n = 0;
    double r_max = 0.0;
    double dr = 0.0;
    std::vector<double> r;
    std::vector<double> k;
  };
  std::shared_ptr<const Tables> tables_;
};

/// Mass parameter m of the dispersion √(k²+m²).
struct ModelParams {
  double mass = 0.0;
};

}  // namespace bosonstar
