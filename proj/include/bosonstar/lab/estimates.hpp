#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bosonstar/lab/periodic.hpp"
#include "bosonstar/lab/quadrature.hpp"

namespace bosonstar::lab {

/// Default resolved band: |k| ≤ ½ k_Nyquist.
inline constexpr double kDefaultBand = 0.5;

inline double beta_identity(double s, const QuadratureControls& q = {}) {
  const HalfLineRule rule(s - 1.0, 1.0, q);
  return std::sin(std::numbers::pi * s) / std::numbers::pi * rule.integrate([](double) { return 1.0; });
}

/// ‖(1−Δ)^s − (sin πs/π) Σᵢ wᵢ (1−Δ)(tᵢ+1−Δ)⁻¹‖ / ‖(1−Δ)^s‖ with dense resolvent solves.
inline double resolvent_reconstruction_error(const PeriodicGrid1D& g, double s, const QuadratureControls& q = {}) {
  const auto target = build_fractional(g, s, 1.0);
  const auto a = build_fractional(g, 1.0, 1.0).matrix;
  const HalfLineRule rule(s - 1.0, 1.0, q);
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix acc = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < rule.t.size(); ++i) {
    const Matrix shifted = a + rule.t[i] * Matrix::Identity(n, n);
    acc += (rule.w[i] * (1.0 + rule.t[i])) * shifted.partialPivLu().solve(a);
  }
  acc *= std::sin(std::numbers::pi * s) / std::numbers::pi;
  return operator_norm(target.matrix - acc) / target.norm();
}

/// ‖P[(a−Δ)^{s/2}, χ]P*‖ on the resolved band.
inline double commutator_norm(const PeriodicGrid1D& g, double s, double a, const GridFunction& chi,
                              double band = kDefaultBand) {
  const auto half = build_fractional(g, 0.5 * s, a);
  const auto x = multiplication(g, chi.values, "chi");
  return operator_norm(compress(commutator(half, x).matrix, band_rows(g, band)));
}

/// Proof constant for a = 1, 0 < s < 1: (sin(πs/2)/π)∫₀^∞ t^{s/2}(1+t)^{−3/2} dt.
inline double commutator_theory_constant(double s) {
  const double p = 0.5 * s, q = 1.5;
  const double beta = std::exp(std::lgamma(p + 1) + std::lgamma(q - p - 1) - std::lgamma(q));
  return std::sin(0.5 * std::numbers::pi * s) / std::numbers::pi * beta;
}

struct CommutatorCalibration {
  std::vector<double> ratios;  // norm / ‖∇χ‖_∞
  double max_ratio = 0.0;
  double c_cal = 0.0;
};

/// Sweeps random smooth χ over the given s values; C_cal = safety · max ratio.
inline CommutatorCalibration calibrate_commutator(const PeriodicGrid1D& g, const std::vector<double>& s_values,
                                                  double a, std::size_t samples, std::mt19937_64& rng,
                                                  double safety = 1.25) {
  CommutatorCalibration out;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto chi = random_smooth_cutoff(g, rng);
    for (double s : s_values) {
      const double r = commutator_norm(g, s, a, chi) / chi.grad_inf();
      out.ratios.push_back(r);
      out.max_ratio = std::max(out.max_ratio, r);
    }
  }
  out.c_cal = safety * out.max_ratio;
  return out;
}

struct LocalizationReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double bound = 0.0;  // 4s‖∇χ‖²_∞
  double double_commutator_norm = 0.0;
  double double_commutator_bound = 0.0;  // 8s‖∇χ‖²_∞
  double tail_estimate = 0.0;
  double full_space_lambda_min = 0.0;
  double hermiticity_error = 0.0;
  bool pass = false;
};

struct LocalizationResult {
  DenseOperator l_chi;
  LocalizationReport report;
};

/// L_χ = ½[χ,[χ,(1−Δ)^s]] + (sin πs/π)∫(t+1−Δ)⁻¹|∇χ|²(t+1−Δ)⁻¹ t^s dt.
///
/// The integral is evaluated entrywise in the Fourier basis, where the resolvents are diagonal.
inline LocalizationResult localization_defect(const PeriodicGrid1D& g, double s, const GridFunction& chi,
                                              const QuadratureControls& q = {}, double band = kDefaultBand,
                                              double tol = 1e-8) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("s must lie in (0,1)");
  const double grad2 = chi.grad_inf() * chi.grad_inf();
  const double prefactor = std::sin(std::numbers::pi * s) / std::numbers::pi;
  const HalfLineRule rule(s, 2.0, q);
  LocalizationReport rep;
  rep.tail_estimate = prefactor * rule.tail_bound * grad2;
  if (rep.tail_estimate > q.tail_tol)
    throw QuadratureTailTooLarge("resolvent integral tail exceeds tolerance", rep.tail_estimate);

  const auto n = static_cast<Eigen::Index>(g.size());
  const Matrix f = fourier_matrix(g);
  std::vector<double> x(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double k = (j == g.size() / 2) ? g.nyquist() : g.frequency(j);
    x[j] = 1.0 + k * k;
  }
  Eigen::VectorXcd sym(n);
  for (Eigen::Index j = 0; j < n; ++j) sym(j) = std::pow(x[static_cast<std::size_t>(j)], s);
  const Matrix a = f.adjoint() * sym.asDiagonal() * f;

  Eigen::VectorXcd chi_v(n), g2(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    chi_v(j) = chi.values[static_cast<std::size_t>(j)];
    g2(j) = std::pow(chi.gradient[static_cast<std::size_t>(j)], 2);
  }
  const Matrix c1 = chi_v.asDiagonal() * a - a * chi_v.asDiagonal();
  const Matrix dc = chi_v.asDiagonal() * c1 - c1 * chi_v.asDiagonal();

  Matrix ghat = f * g2.asDiagonal() * f.adjoint();
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index r = 0; r < n; ++r) {
      const double xp = x[static_cast<std::size_t>(p)], xr = x[static_cast<std::size_t>(r)];
      ghat(p, r) *= prefactor * rule.integrate([&](double t) { return (1 + t) * (1 + t) / ((t + xp) * (t + xr)); });
    }
  Matrix l = 0.5 * dc + f.adjoint() * ghat * f;
  rep.hermiticity_error = (l - l.adjoint()).cwiseAbs().maxCoeff();
  const Matrix herm = 0.5 * (l + l.adjoint());

  const Matrix rows = band_rows(g, band);
  Eigen::SelfAdjointEigenSolver<Matrix> es(compress(herm, rows), Eigen::EigenvaluesOnly);
  rep.lambda_min = es.eigenvalues().minCoeff();
  rep.lambda_max = es.eigenvalues().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> full(herm, Eigen::EigenvaluesOnly);
  rep.full_space_lambda_min = full.eigenvalues().minCoeff();
  rep.bound = 4.0 * s * grad2;
  rep.double_commutator_norm = operator_norm(compress(dc, rows));
  rep.double_commutator_bound = 8.0 * s * grad2;
  rep.pass = rep.lambda_min >= -tol && rep.lambda_max <= rep.bound * (1 + 1e-6) &&
             rep.double_commutator_norm <= rep.double_commutator_bound;
  return {DenseOperator{std::move(l), g, "L_chi"}, rep};
}

inline void check_partition(const std::vector<GridFunction>& partition, double tol = 1e-10) {
  if (partition.empty()) throw NotAPartition(1.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < partition.front().values.size(); ++j) {
    double s = 0.0;
    for (const auto& c : partition) s += c.values[j] * c.values[j];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  if (worst > tol) throw NotAPartition(worst);
}

struct ImsReport {
  double defect = 0.0;  // λ_min + s‖Σ|∇χ_k|²‖_∞
  double lambda_min = 0.0;
  double gradient_sum_sup = 0.0;
  bool pass = false;
};

/// λ_min(P[(1−Δ)^s − Σχ_k(1−Δ)^sχ_k]P*) + s‖Σ|∇χ_k|²‖_∞.
inline ImsReport ims_defect(const PeriodicGrid1D& g, double s, const std::vector<GridFunction>& partition,
                            double band = kDefaultBand, double tol = 1e-8) {
  check_partition(partition);
  const Matrix a = build_fractional(g, s, 1.0).matrix;
  Matrix d = a;
  const auto n = static_cast<Eigen::Index>(g.size());
  std::vector<double> gsum(g.size(), 0.0);
  for (const auto& c : partition) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index j = 0; j < n; ++j) v(j) = c.values[static_cast<std::size_t>(j)];
    d -= v.asDiagonal() * a * v.asDiagonal();
    for (std::size_t j = 0; j < g.size(); ++j) gsum[j] += c.gradient[j] * c.gradient[j];
  }
  ImsReport r;
  for (double x : gsum) r.gradient_sum_sup = std::max(r.gradient_sum_sup, x);
  const Matrix dp = compress(0.5 * (d + d.adjoint()), band_rows(g, band));
  Eigen::SelfAdjointEigenSolver<Matrix> es(dp, Eigen::EigenvaluesOnly);
  r.lambda_min = es.eigenvalues().minCoeff();
  r.defect = r.lambda_min + s * r.gradient_sum_sup;
  r.pass = r.defect >= -tol;
  return r;
}

/// ‖P[(−Δ) − Σχ_k(−Δ)χ_k + Σ|∇χ_k|²]P*‖, which vanishes for smooth partitions.
inline double classical_ims_residual(const PeriodicGrid1D& g, const std::vector<GridFunction>& partition,
                                     double band = kDefaultBand) {
  check_partition(partition);
  const Matrix lap = fourier_multiplier(g, [](double k) { return k * k; }, "-Laplacian").matrix;
  Matrix d = lap;
  const auto n = static_cast<Eigen::Index>(g.size());
  for (const auto& c : partition) {
    Eigen::VectorXcd v(n), gr(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      v(j) = c.values[static_cast<std::size_t>(j)];
      gr(j) = std::pow(c.gradient[static_cast<std::size_t>(j)], 2);
    }
    d -= v.asDiagonal() * lap * v.asDiagonal();
    d += Matrix(gr.asDiagonal());
  }
  return operator_norm(compress(d, band_rows(g, band)));
}

}  // namespace bosonstar::lab
