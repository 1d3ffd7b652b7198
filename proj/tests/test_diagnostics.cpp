#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>

#include "bosonstar/diagnostics/checks.hpp"

using namespace bosonstar;

namespace {

constexpr double pi = std::numbers::pi;

Field gaussian(const RadialGrid& g, double width, double target_mass) {
  Field f = Field::from_function(g, [&](double r) { return cplx(std::exp(-r * r / (2 * width * width)), 0.0); });
  return f * std::sqrt(target_mass / mass(f));
}

Field free_oracle(const Field& u, double tau, double m) {
  auto c = radial_transform(u);
  for (std::size_t j = 0; j < c.coefficients.size(); ++j) {
    const double k = u.grid().frequency(j);
    c.coefficients[j] *= std::polar(1.0, -tau * std::sqrt(k * k + m * m));
  }
  return inverse_radial_transform(c);
}

Trajectory free_run(const RadialGrid& g, double width, double t_end, double dt, std::size_t stride, double m = 0.0) {
  EvolutionControls c;
  c.dt0 = dt;
  c.t_end = t_end;
  c.adaptive = false;
  c.nonlinear = false;
  c.snapshot_stride = stride;
  return evolve(gaussian(g, width, 1.0), ModelParams{m}, c);
}

/// u(t) = e^{iωt} q at the given times.
Trajectory stationary(const Field& q, const std::vector<double>& times, double omega = 0.7) {
  Trajectory t;
  for (std::size_t i = 0; i < times.size(); ++i) {
    t.snapshots.push_back({i, times[i], true, q * std::polar(1.0, omega * times[i])});
    StepRecord r;
    r.t = times[i];
    r.mass = mass(q);
    r.resolved = true;
    t.records.push_back(r);
  }
  return t;
}

}  // namespace

TEST(LocalizedMass, Identities) {
  RadialGrid g(511, 20.0);
  const Field u = gaussian(g, 1.5, 2.0);
  EXPECT_NEAR(localized_mass(u, constant_cutoff(g)), mass(u), 1e-12 * mass(u));
  for (double r : cutoff_bank_radii())
    EXPECT_NEAR(localized_mass(u, smooth_bump(g, r)) + localized_mass(u, smooth_exterior(g, r)), mass(u), 1e-12);
  const Field compact = Field::from_function(g, [](double r) { return cplx(r < 1 ? std::pow(1 - r * r, 2) : 0.0, 0); });
  std::vector<double> outside(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) outside[j] = g.radius(j) > 2 ? 1.0 : 0.0;
  EXPECT_EQ(localized_mass(compact, custom_cutoff(g, outside)), 0.0);
}

TEST(Cutoffs, Invariants) {
  RadialGrid g(1023, 40.0);
  const auto bank = cutoff_bank(g);
  ASSERT_EQ(bank.size(), 8u);
  for (const auto& c : bank) {
    for (double x : c.samples) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    EXPECT_GT(c.grad_inf, 0.0);
    EXPECT_LE(detail::finite_difference_grad(g, c.samples), c.grad_inf * (1 + 1e-3));
  }
  const auto z = compact_exterior(g, 4.0);
  EXPECT_NEAR(detail::finite_difference_grad(g, z.samples), z.grad_inf, 0.01 * z.grad_inf);
  EXPECT_THROW(smooth_bump(g, 0.0), InvalidArgument);
  EXPECT_THROW(custom_cutoff(g, std::vector<double>(g.size(), 1.5)), InvalidArgument);
}

TEST(Propagation, ConstantCutoffAndErrors) {
  RadialGrid g(511, 40.0);
  const auto traj = free_run(g, 1.0, 4.0, 0.1, 5);
  const auto r = propagation_bound_check(traj, constant_cutoff(g), 1.0).record;
  EXPECT_LT(r.statistic, 1e-9);
  EXPECT_TRUE(r.pass);
  Trajectory shortt = stationary(gaussian(g, 1.0, 1.0), {0.0, 1.0});
  EXPECT_THROW(propagation_bound_check(shortt, constant_cutoff(g), 1.0), InsufficientSnapshots);
}

TEST(Propagation, StableUnderRefinement) {
  RadialGrid g(1023, 60.0);
  const auto chi = smooth_bump(g, 4.0);
  const double coarse = propagation_bound_check(free_run(g, 0.5, 10.0, 0.05, 4), chi, 1.0).record.statistic;
  const double fine = propagation_bound_check(free_run(g, 0.5, 10.0, 0.05, 2), chi, 1.0).record.statistic;
  EXPECT_GT(coarse, 0.0);
  EXPECT_NEAR(coarse / fine, 1.0, 0.1);
}

TEST(Propagation, DilationDecay) {
  RadialGrid g(2047, 80.0);
  const auto traj = free_run(g, 0.25, 40.0, 0.1, 2);
  std::vector<double> scaled;
  for (double r : cutoff_bank_radii()) {
    const auto res = propagation_bound_check(traj, smooth_bump(g, r), 1.0);
    EXPECT_TRUE(res.record.pass);
    scaled.push_back(res.max_rate * r);
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  EXPECT_LE(*hi / *lo, 2.0);
}

TEST(Tightness, StationaryProfile) {
  RadialGrid g(511, 20.0);
  const Field q = gaussian(g, 1.0, 1.0);
  const auto traj = stationary(q, {0.0, 0.5, 1.0, 1.5});
  const double eps = 1e-4;
  double expected = -1;
  for (std::size_t j = 0; j < g.size() && expected < 0; ++j) {
    double tail = 0;
    for (std::size_t i = j; i < g.size(); ++i) tail += 4 * pi * g.dr() * std::norm(q[i]) * g.radius(i) * g.radius(i);
    if (tail <= eps) expected = g.radius(j);
  }
  EXPECT_DOUBLE_EQ(tightness_check(traj, eps), expected);
  EXPECT_DOUBLE_EQ(tightness_check(traj, 2.0), g.radius(0));
  EXPECT_THROW(tightness_check(traj, 0.0), NotTightOnGrid);
}

TEST(Concentration, TrivialCases) {
  RadialGrid g(1023, 10.0);
  const Field u = gaussian(g, 0.3, 1.0);
  const auto all = concentration_function(u, 12.0);
  EXPECT_EQ(all.center, 0.0);
  EXPECT_NEAR(all.value, mass(u), 1e-12);
  const auto c = concentration_function(u, 0.9);
  EXPECT_EQ(c.center, 0.0);
  EXPECT_GT(c.value, 0.99 * mass(u));
}

TEST(Concentration, ShellMatchesBruteForce) {
  RadialGrid g(511, 20.0);
  const double a = 6.0;
  const Field u = Field::from_function(g, [&](double r) { return cplx(std::exp(-(r - a) * (r - a) / 0.5), 0); });
  for (double radius : {0.5, 1.0, 3.0}) {
    const auto got = concentration_function(u, radius);
    double best = -1, where = 0;
    for (std::size_t j = 0; j <= g.size(); ++j) {
      const double y = static_cast<double>(j) * g.dr();
      const double m = detail::ball_mass(u, y, radius);
      if (m > best) best = m, where = y;
    }
    EXPECT_LE(std::abs(got.center - where), 2 * g.dr()) << radius;
    EXPECT_NEAR(got.value, best, 1e-3 * best);
  }
}

TEST(MinimalConcentration, NotApplicableWithoutStepFloor) {
  RadialGrid g(511, 20.0);
  const auto traj = free_run(g, 1.0, 1.0, 0.1, 2);
  GroundState gs;
  gs.critical_mass = 2.69;
  const auto r = minimal_concentration_check(traj, gs).record;
  EXPECT_FALSE(r.applicable);
  EXPECT_TRUE(r.pass);
}

TEST(BlowupMeasure, HistogramsAndFreeFlowLimit) {
  RadialGrid g(1023, 60.0);
  const double t_end = 10.0;
  const auto traj = free_run(g, 0.5, t_end, 0.05, 4, 1.0);
  const auto res = blowup_measure(traj, 64, 1.0);
  EXPECT_LT(res.max_histogram_error, 1e-9);
  EXPECT_EQ(res.histograms.front().edges.size(), 65u);
  EXPECT_EQ(res.cauchy.size(), 8u);
  for (const auto& r : res.cauchy) EXPECT_TRUE(r.pass) << r.note;
  const auto exact = radial_histogram(free_oracle(traj.snapshots.front().u, t_end, 1.0), 64, t_end);
  for (std::size_t b = 0; b < 64; ++b) EXPECT_NEAR(res.histograms.back().masses[b], exact.masses[b], 1e-11);
  for (const auto& chi : cutoff_bank(g)) {
    const auto osc = tail_oscillations(traj, chi);
    for (std::size_t i = 1; i < osc.size(); ++i) EXPECT_LE(osc[i], osc[i - 1]);
    EXPECT_EQ(osc.back(), 0.0);
  }
}

TEST(Exterior, PotentialSupportBound) {
  RadialGrid g(1023, 30.0);
  EvolutionControls c;
  c.dt0 = 0.02;
  c.t_end = 1.0;
  c.snapshot_stride = 10;
  const auto traj = evolve(gaussian(g, 1.0, 1.3), ModelParams{1.0}, c);
  for (const auto& s : traj.snapshots)
    for (double radius : {2.0, 5.0}) {
      const auto e = exterior_ingredients(s.u, ModelParams{1.0}, radius, traj.initial_mass());
      EXPECT_LE(e.potential_sup, e.potential_sup_bound);
      EXPECT_LE(e.potential_term, e.potential_term_bound);
    }
  EXPECT_TRUE(newton_bound_check(traj).pass);
}

TEST(Exterior, OutgoingFreeFlowIsNotCauchy) {
  RadialGrid g(1023, 60.0);
  const auto traj = free_run(g, 1.5, 20.0, 0.1, 20);
  const auto res = exterior_convergence_check(traj, 5.0);
  ASSERT_EQ(res.distances.size(), 4u);
  EXPECT_FALSE(res.record.pass);
  for (double d : res.distances) EXPECT_NEAR(d, res.distances.front(), 1e-3 * d);
  EXPECT_GT(detail::exterior_mass_profile(traj.snapshots.back().u)[0], 0.0);
}

TEST(Virial, InitialWeightMatchesQuadrature) {
  RadialGrid g(2047, 30.0);
  const Field u = Field::from_function(g, [](double r) { return cplx(std::exp(-r * r / 2), 0); });
  boost::math::quadrature::exp_sinh<double> q;
  for (double m : {0.0, 1.0}) {
    const double want = 4 * pi * q.integrate([m](double k) { return k > 40 ? 0.0 : std::sqrt(k * k + m * m) * std::pow(k, 4) * std::exp(-k * k); });
    EXPECT_NEAR(virial_weight(u, ModelParams{m}), want, 1e-8 * want) << m;
  }
  EXPECT_NEAR(weighted_moment(u, [](double) { return 1.0; }), 1.5 * std::pow(pi, 1.5), 1e-10);
}

TEST(Virial, StationaryWeightConstant) {
  RadialGrid g(511, 20.0);
  const auto traj = stationary(gaussian(g, 1.0, 1.0), {0.0, 1.0, 2.0, 3.0, 4.0});
  const auto res = virial_check(traj, ModelParams{1.0});
  for (double w : res.weights) EXPECT_NEAR(w, res.weights.front(), 1e-8 * res.weights.front());
  EXPECT_NEAR(res.a, 0.0, 1e-8);
}
