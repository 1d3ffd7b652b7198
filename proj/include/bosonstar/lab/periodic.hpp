#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bosonstar/errors.hpp"

namespace bosonstar::lab {

using Matrix = Eigen::MatrixXcd;
using cplx = std::complex<double>;

/// n points x_j = −L/2 + jL/n; frequencies in FFT order, the Nyquist entry taken as |k| = πn/L.
class PeriodicGrid1D {
 public:
  PeriodicGrid1D(std::size_t n, double length) : n_(n), length_(length) {
    if (n < 2 || n % 2 != 0) throw InvalidArgument("periodic grid needs an even n >= 2");
    if (!(length > 0.0)) throw InvalidArgument("period must be positive");
  }

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / static_cast<double>(n_); }
  double x(std::size_t j) const noexcept { return -0.5 * length_ + static_cast<double>(j) * spacing(); }

  /// Signed frequency 2πj/L with j ∈ [−n/2, n/2).
  double frequency(std::size_t j) const noexcept {
    const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
    auto m = static_cast<std::ptrdiff_t>(j);
    if (m >= half) m -= static_cast<std::ptrdiff_t>(n_);
    return 2.0 * std::numbers::pi * static_cast<double>(m) / length_;
  }

  double nyquist() const noexcept { return std::numbers::pi * static_cast<double>(n_) / length_; }

 private:
  std::size_t n_;
  double length_;
};

/// Real samples with analytic gradient.
struct GridFunction {
  std::vector<double> values;
  std::vector<double> gradient;

  double grad_inf() const {
    double m = 0.0;
    for (double g : gradient) m = std::max(m, std::abs(g));
    return m;
  }
};

struct DenseOperator {
  Matrix matrix;
  PeriodicGrid1D grid;
  std::string label;

  double norm() const;
  bool is_self_adjoint(double rel_tol = 1e-12) const {
    const double scale = std::max(matrix.cwiseAbs().maxCoeff(), 1e-300);
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() < rel_tol * scale;
  }
};

/// Largest singular value.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double DenseOperator::norm() const { return operator_norm(matrix); }

/// Unitary DFT matrix F(k, j) = e^{−i k x_j}/√n.
inline Matrix fourier_matrix(const PeriodicGrid1D& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix f(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      f(k, j) = std::polar(s, -g.frequency(static_cast<std::size_t>(k)) * g.x(static_cast<std::size_t>(j)));
  return f;
}

/// F* diag(σ(|k|)) F
template <class Symbol>
DenseOperator fourier_multiplier(const PeriodicGrid1D& g, Symbol&& sigma, std::string label) {
  const Matrix f = fourier_matrix(g);
  Eigen::VectorXcd d(static_cast<Eigen::Index>(g.size()));
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double k = (j == g.size() / 2) ? g.nyquist() : std::abs(g.frequency(j));
    d(static_cast<Eigen::Index>(j)) = sigma(k);
  }
  return {f.adjoint() * d.asDiagonal() * f, g, std::move(label)};
}

/// (a − Δ)^s
inline DenseOperator build_fractional(const PeriodicGrid1D& g, double s, double a) {
  if (!(s > 0.0 && s <= 1.0)) throw InvalidArgument("s must lie in (0,1]");
  if (!(a >= 0.0)) throw InvalidArgument("a must be nonnegative");
  return fourier_multiplier(g, [=](double k) { return std::pow(a + k * k, s); },
                            "(a-Laplacian)^s");
}

inline DenseOperator multiplication(const PeriodicGrid1D& g, const std::vector<double>& values, std::string label) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(g.size()));
  for (std::size_t j = 0; j < g.size(); ++j) d(static_cast<Eigen::Index>(j)) = values[j];
  return {Matrix(d.asDiagonal()), g, std::move(label)};
}

inline DenseOperator commutator(const DenseOperator& a, const DenseOperator& b) {
  return {a.matrix * b.matrix - b.matrix * a.matrix, a.grid, "[" + a.label + "," + b.label + "]"};
}

/// Orthonormal basis (rows of F) of the band |k| ≤ fraction·k_Nyquist.
inline Matrix band_rows(const PeriodicGrid1D& g, double fraction = 0.5) {
  const Matrix f = fourier_matrix(g);
  std::vector<Eigen::Index> keep;
  for (std::size_t j = 0; j < g.size(); ++j)
    if (j != g.size() / 2 && std::abs(g.frequency(j)) <= fraction * g.nyquist() + 1e-12)
      keep.push_back(static_cast<Eigen::Index>(j));
  Matrix p(static_cast<Eigen::Index>(keep.size()), f.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) p.row(i) = f.row(keep[static_cast<std::size_t>(i)]);
  return p;
}

/// Compression P M P* onto the resolved band.
inline Matrix compress(const Matrix& m, const Matrix& band) { return band * m * band.adjoint(); }

// ---------------------------------------------------------------------------
// Grid functions

/// Periodic tanh bump: ½[tanh((x−c+R)/w) − tanh((x−c−R)/w)] summed over nearby periods.
inline GridFunction periodic_bump(const PeriodicGrid1D& g, double center, double half_width, double edge,
                                  double amplitude = 1.0) {
  GridFunction f{std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0)};
  for (std::size_t j = 0; j < g.size(); ++j) {
    for (int image = -3; image <= 3; ++image) {
      const double y = g.x(j) - center + image * g.length();
      const double p = std::tanh((y + half_width) / edge), m = std::tanh((y - half_width) / edge);
      f.values[j] += 0.5 * amplitude * (p - m);
      f.gradient[j] += 0.5 * amplitude * ((1 - p * p) - (1 - m * m)) / edge;
    }
  }
  return f;
}

inline GridFunction constant_function(const PeriodicGrid1D& g, double c) {
  return {std::vector<double>(g.size(), c), std::vector<double>(g.size(), 0.0)};
}

/// χ_R(x) = f(x/R), f(y) = ½[tanh(2(y+1)) − tanh(2(y−1))].
inline GridFunction dilation_cutoff(const PeriodicGrid1D& g, double radius) {
  return periodic_bump(g, 0.0, radius, 0.5 * radius);
}

/// Smooth random cutoff in [0,1]: one to three bumps with edges ≥ 3.
inline GridFunction random_smooth_cutoff(const PeriodicGrid1D& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double len = g.length();
  const int count = 1 + static_cast<int>(3.0 * u(rng)) % 3;
  GridFunction f = constant_function(g, 0.0);
  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    const double amp = 0.2 + 0.8 * u(rng);
    total += amp;
    const auto b = periodic_bump(g, (u(rng) - 0.5) * 0.6 * len, 0.05 * len + 0.1 * len * u(rng),
                                 3.0 + 3.0 * u(rng), amp);
    for (std::size_t j = 0; j < g.size(); ++j) {
      f.values[j] += b.values[j];
      f.gradient[j] += b.gradient[j];
    }
  }
  const double scale = 1.0 / std::max(1.0, total);
  for (std::size_t j = 0; j < g.size(); ++j) {
    f.values[j] *= scale;
    f.gradient[j] *= scale;
  }
  return f;
}

/// Two-element partition {cos θ, sin θ} with θ = (π/2)·bump.
inline std::vector<GridFunction> two_element_partition(const PeriodicGrid1D& g, double half_width, double edge) {
  const auto b = periodic_bump(g, 0.0, half_width, edge);
  GridFunction c = b, s = b;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double th = 0.5 * std::numbers::pi * b.values[j], dth = 0.5 * std::numbers::pi * b.gradient[j];
    c.values[j] = std::cos(th);
    c.gradient[j] = -std::sin(th) * dth;
    s.values[j] = std::sin(th);
    s.gradient[j] = std::cos(th) * dth;
  }
  return {c, s};
}

}  // namespace bosonstar::lab
