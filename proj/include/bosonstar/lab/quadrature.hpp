#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bosonstar/errors.hpp"

namespace bosonstar::lab {

struct QuadratureControls {
  std::size_t nodes = 64;
  double t_max = std::numeric_limits<double>::infinity();
  double tail_tol = 1e-8;
};

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Jacobi rule on [−1,1] for the weight (1−z)^α(1+z)^β (Golub–Welsch).
inline Rule gauss_jacobi(std::size_t n, double alpha, double beta) {
  if (n == 0) throw InvalidArgument("quadrature needs at least one node");
  if (!(alpha > -1.0 && beta > -1.0)) throw InvalidArgument("Jacobi exponents must exceed -1");
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
  const double ab = alpha + beta;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double k = static_cast<double>(i);
    const double den = (2 * k + ab) * (2 * k + ab + 2);
    jac(i, i) = (i == 0) ? (beta - alpha) / (ab + 2) : (beta * beta - alpha * alpha) / den;
    if (i + 1 < m) {
      const double j = k + 1;
      const double num = 4 * j * (j + alpha) * (j + beta) * (j + ab);
      const double d = (2 * j + ab) * (2 * j + ab) * (2 * j + ab + 1) * (2 * j + ab - 1);
      jac(i, i + 1) = jac(i + 1, i) = std::sqrt(num / d);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  const double mu0 = std::exp((ab + 1) * std::log(2.0) + std::lgamma(alpha + 1) + std::lgamma(beta + 1) -
                              std::lgamma(ab + 2));
  Rule r;
  for (Eigen::Index i = 0; i < m; ++i) {
    r.nodes.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    r.weights.push_back(mu0 * v * v);
  }
  return r;
}

/// Rule for ∫₀^{t_max} t^p (1+t)^{−q} h(t) dt ≈ Σ wᵢ h(tᵢ) through t = tan²θ.
///
/// In θ the integrand is 2 sin^{2p+1}θ cos^{2q−2p−3}θ h(tan²θ); both endpoint powers go into a
/// Gauss–Jacobi weight, the rest is smooth.
struct HalfLineRule {
  std::vector<double> t;
  std::vector<double> w;
  double tail_bound = 0.0;  // bound on ∫_{t_max}^∞ t^p(1+t)^{−q} dt

  HalfLineRule(double p, double q, const QuadratureControls& c = {}) {
    const double beta = 2 * p + 1, alpha = 2 * q - 2 * p - 3;
    if (!(p > -1.0)) throw InvalidArgument("t^p must be integrable at 0");
    const bool infinite = std::isinf(c.t_max);
    if (infinite && !(q - p > 1.0)) throw InvalidArgument("integrand must decay faster than 1/t");
    const double theta_max = infinite ? 0.5 * std::numbers::pi : std::atan(std::sqrt(c.t_max));
    const Rule r = gauss_jacobi(c.nodes, infinite ? alpha : 0.0, beta);
    const double half = 0.5 * theta_max;
    const double scale = std::pow(half, beta + 1) * (infinite ? std::pow(half, alpha) : 1.0);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double theta = half * (1 + r.nodes[i]);
      const double sn = std::sin(theta), cs = std::cos(theta);
      double smooth = 2.0 * std::pow(sn / theta, beta);
      smooth *= infinite ? std::pow(cs / (0.5 * std::numbers::pi - theta), alpha) : std::pow(cs, alpha);
      t.push_back((sn * sn) / (cs * cs));
      w.push_back(scale * r.weights[i] * smooth);
    }
    if (!infinite) tail_bound = q - p > 1.0 ? std::pow(c.t_max, p - q + 1) / (q - p - 1) : INFINITY;
  }

  template <class H>
  double integrate(H&& h) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) acc += w[i] * h(t[i]);
    return acc;
  }
};

}  // namespace bosonstar::lab
