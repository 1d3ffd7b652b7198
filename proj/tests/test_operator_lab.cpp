#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bosonstar/lab/estimates.hpp"
#include "bosonstar/lab/sequences.hpp"

using namespace bosonstar;
using namespace bosonstar::lab;

namespace {

constexpr double pi = std::numbers::pi;

/// Periodic spectral second-derivative matrix in closed form (even n).
Matrix spectral_laplacian(const PeriodicGrid1D& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const double h = 2 * pi / static_cast<double>(n);
  const double scale = std::pow(2 * pi / g.length(), 2);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d2 = (i == j) ? -pi * pi / (3 * h * h) - 1.0 / 6.0
                                 : -((i - j) % 2 ? -1.0 : 1.0) / (2 * std::pow(std::sin((i - j) * h / 2), 2));
      m(i, j) = -scale * d2;
    }
  return m;
}

/// L_χ rebuilt with the divided-difference matrix (x_p^s − x_q^s)/(x_p − x_q) in place of the resolvent integral.
Matrix loewner_l_chi(const PeriodicGrid1D& g, double s, const GridFunction& chi) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const Matrix f = fourier_matrix(g);
  std::vector<double> x(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double k = (j == g.size() / 2) ? g.nyquist() : g.frequency(j);
    x[j] = 1 + k * k;
  }
  Matrix lw(n, n);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q) {
      const double a = x[static_cast<std::size_t>(p)], b = x[static_cast<std::size_t>(q)];
      lw(p, q) = std::abs(a - b) < 1e-12 * a ? s * std::pow(a, s - 1) : (std::pow(a, s) - std::pow(b, s)) / (a - b);
    }
  Eigen::VectorXcd xs(n), c(n), g2(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    xs(j) = std::pow(x[static_cast<std::size_t>(j)], s);
    c(j) = chi.values[static_cast<std::size_t>(j)];
    g2(j) = std::pow(chi.gradient[static_cast<std::size_t>(j)], 2);
  }
  const Matrix a = f.adjoint() * xs.asDiagonal() * f;
  const Matrix c1 = c.asDiagonal() * a - a * c.asDiagonal();
  const Matrix dc = c.asDiagonal() * c1 - c1 * c.asDiagonal();
  const Matrix ghat = f * g2.asDiagonal() * f.adjoint();
  return 0.5 * dc + f.adjoint() * ghat.cwiseProduct(lw) * f;
}

}  // namespace

TEST(Fractional, MatchesSpectralLaplacian) {
  PeriodicGrid1D g(64, 20.0);
  const auto a = build_fractional(g, 1.0, 0.0);
  const Matrix ref = spectral_laplacian(g);
  EXPECT_LT((a.matrix - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST(Fractional, SelfAdjointAndPositive) {
  PeriodicGrid1D g(64, 20.0);
  for (double s : {0.25, 0.5, 1.0}) {
    const auto a = build_fractional(g, s, 1.0);
    EXPECT_TRUE(a.is_self_adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix);
    EXPECT_GT(es.eigenvalues().minCoeff(), 1.0 - 1e-10);
  }
  EXPECT_THROW(build_fractional(g, 1.5, 1.0), InvalidArgument);
  EXPECT_THROW(build_fractional(g, 0.5, -1.0), InvalidArgument);
}

TEST(Fractional, ScalarIdentity) {
  for (double s : {0.25, 0.5, 0.75}) EXPECT_NEAR(beta_identity(s), 1.0, 1e-8);
}

TEST(Fractional, ResolventReconstruction) {
  PeriodicGrid1D g(128, 40.0);
  EXPECT_LT(resolvent_reconstruction_error(g, 0.5), 1e-6);
}

TEST(Commutator, ConstantCutoffCommutes) {
  PeriodicGrid1D g(128, 40.0);
  for (double s : {0.5, 1.0}) EXPECT_LT(commutator_norm(g, s, 1.0, constant_function(g, 0.7)), 1e-12);
}

TEST(Commutator, DilationDecay) {
  PeriodicGrid1D g(512, 128.0);
  for (double s : {0.5, 1.0}) {
    double lo = 1e300, hi = 0;
    for (double r : {1.0, 2.0, 4.0, 8.0, 16.0}) {
      const double scaled = commutator_norm(g, s, 1.0, dilation_cutoff(g, r)) * r;
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
    EXPECT_LE(hi / lo, 2.0) << "s=" << s;
  }
}

TEST(Commutator, SingleCalibratedConstant) {
  PeriodicGrid1D g(128, 40.0);
  std::mt19937_64 rng(11);
  const auto cal = calibrate_commutator(g, {0.5, 1.0}, 1.0, 20, rng);
  ASSERT_EQ(cal.ratios.size(), 40u);
  std::mt19937_64 fresh(12);
  for (int i = 0; i < 5; ++i) {
    const auto chi = random_smooth_cutoff(g, fresh);
    for (double s : {0.5, 1.0}) EXPECT_LE(commutator_norm(g, s, 1.0, chi), cal.c_cal * chi.grad_inf());
  }
  EXPECT_NEAR(commutator_theory_constant(0.5), 0.8346, 1e-4);
}

TEST(Localization, MatchesDividedDifferenceOracle) {
  PeriodicGrid1D g(64, 30.0);
  std::mt19937_64 rng(5);
  for (double s : {0.3, 0.7}) {
    const auto chi = random_smooth_cutoff(g, rng);
    const auto res = localization_defect(g, s, chi);
    const Matrix ref = loewner_l_chi(g, s, chi);
    EXPECT_LT((res.l_chi.matrix - ref).norm(), 1e-10 * (1 + ref.norm()));
  }
}

TEST(Localization, SpectrumBounds) {
  PeriodicGrid1D g(128, 64.0);
  std::mt19937_64 rng(3);
  for (double s : {0.3, 0.5, 0.7})
    for (int i = 0; i < 10; ++i) {
      const auto rep = localization_defect(g, s, random_smooth_cutoff(g, rng)).report;
      EXPECT_GE(rep.lambda_min, -1e-8);
      EXPECT_LE(rep.lambda_max, rep.bound * (1 + 1e-6));
      EXPECT_LE(rep.double_commutator_norm, rep.double_commutator_bound);
      EXPECT_LT(rep.hermiticity_error, 1e-12);
      EXPECT_TRUE(rep.pass);
    }
}

TEST(Localization, ConstantCutoffVanishes) {
  PeriodicGrid1D g(64, 30.0);
  const auto res = localization_defect(g, 0.5, constant_function(g, 1.0));
  EXPECT_LT(res.l_chi.matrix.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Localization, TruncatedQuadratureRejected) {
  PeriodicGrid1D g(64, 30.0);
  std::mt19937_64 rng(1);
  QuadratureControls q;
  q.t_max = 1e3;
  EXPECT_THROW(localization_defect(g, 0.5, random_smooth_cutoff(g, rng), q), QuadratureTailTooLarge);
  EXPECT_THROW(localization_defect(g, 1.0, constant_function(g, 1.0)), InvalidArgument);
}

TEST(Ims, TrivialPartition) {
  PeriodicGrid1D g(64, 30.0);
  const auto r = ims_defect(g, 0.5, {constant_function(g, 1.0)});
  EXPECT_NEAR(r.defect, 0.0, 1e-12);
}

TEST(Ims, TwoElementPartition) {
  PeriodicGrid1D g(128, 64.0);
  const auto part = two_element_partition(g, 10.0, 3.0);
  for (double s : {0.3, 0.5, 0.7, 1.0}) {
    const auto r = ims_defect(g, s, part);
    EXPECT_GE(r.defect, -1e-8) << "s=" << s;
    EXPECT_GT(r.gradient_sum_sup, 0.0);
  }
}

TEST(Ims, ClassicalFormula) {
  PeriodicGrid1D g(128, 64.0);
  EXPECT_LT(classical_ims_residual(g, two_element_partition(g, 10.0, 3.0)), 1e-10);
}

TEST(Ims, RejectsNonPartition) {
  PeriodicGrid1D g(64, 30.0);
  EXPECT_THROW(ims_defect(g, 0.5, {constant_function(g, 0.9)}), NotAPartition);
  EXPECT_THROW(classical_ims_residual(g, {}), NotAPartition);
}

TEST(Sequences, HighestLocalMass) {
  PeriodicGrid1D g(512, 256.0);
  EXPECT_NEAR(highest_local_mass(translated_family(g, 8, 7.0), 6.0), 1.0, 1e-9);
  EXPECT_NEAR(highest_local_mass(two_bump_family(g, 8), 6.0), 1.0, 1e-9);
  const auto spread = spreading_family(g, 16);
  const double r = 1.5;
  double prev = 1e300;
  for (std::size_t n = 1; n <= 16; ++n) {
    const double m = local_mass_maximizer(g, spread.members[n - 1], r).mass;
    const double w = static_cast<double>(n);
    EXPECT_NEAR(m, std::erf(r / w), g.spacing() / (std::sqrt(pi) * w));
    EXPECT_LT(m, prev);
    prev = m;
  }
  EXPECT_NEAR(highest_local_mass(spread, r), std::erf(r / 9.0), g.spacing() / (std::sqrt(pi) * 9.0));
  EXPECT_LT(highest_local_mass(spreading_family(g, 32), r), highest_local_mass(spread, r));
}

TEST(Sequences, RejectsBadMembers) {
  PeriodicGrid1D g(64, 30.0);
  EXPECT_THROW(SequenceFamily(g, {}, "empty"), InvalidArgument);
  EXPECT_THROW(SequenceFamily(g, {Samples(10)}, "short"), InvalidArgument);
  EXPECT_THROW(SequenceFamily(g, {gaussian_bump(g, 0, 1, 1)}, "bounded", 0.5, 1e-3), InvalidArgument);
}

TEST(Subcritical, VanishingFamily) {
  PeriodicGrid1D g(512, 256.0);
  const auto f = spreading_family(g, 16);
  const double q = 2 + 4 * 0.5;
  EXPECT_LT(lp_power(g, f.members.back(), q), 0.1 * lp_power(g, f.members.front(), q));
}

TEST(Subcritical, FixedProfileAndTranslation) {
  PeriodicGrid1D g(512, 256.0);
  const auto f = translated_family(g, 8, 7.0);
  const auto r = subcritical_ratio(f, 0.5);
  EXPECT_TRUE(std::isfinite(r.ratio));
  EXPECT_GT(r.ratio, 0.0);
  EXPECT_NEAR(subcritical_ratio(translate(f, 13.0), 0.5).ratio, r.ratio, 1e-12 * r.ratio);
  EXPECT_NEAR(subcritical_ratio(fixed_family(g, 8), 0.5).ratio, r.ratio, 1e-9 * r.ratio);
}

TEST(Subcritical, CorpusStability) {
  PeriodicGrid1D g(512, 256.0);
  const auto corpus = default_corpus(g);
  for (double s : {0.3, 0.5, 0.7}) {
    const auto rep = subcritical_check(corpus, s);
    EXPECT_EQ(rep.records.size(), corpus.size());
    EXPECT_LE(rep.spread, 3.0) << "s=" << s;
    EXPECT_TRUE(rep.pass);
  }
}

TEST(Profiles, SingleBump) {
  PeriodicGrid1D g(512, 256.0);
  const double eps = 1e-3;
  const auto d = profile_decompose(translated_family(g, 8, 7.0), 0.5, eps);
  ASSERT_EQ(d.profiles.size(), 1u);
  EXPECT_GE(d.profiles[0].mass, 1.0 - eps);
  EXPECT_LE(d.bookkeeping.back().remainder_local_mass, eps);
  EXPECT_NEAR(l2_mass(g, d.profiles[0].v), d.profiles[0].mass, 1e-14);
  EXPECT_NEAR(std::abs(d.profiles[0].v[g.size() / 2]), std::abs(gaussian_bump(g, 0, 1, 1)[g.size() / 2]), 1e-12);
}

TEST(Profiles, TwoSeparatingBumps) {
  PeriodicGrid1D g(512, 256.0);
  const auto f = two_bump_family(g, 8);
  const auto d = profile_decompose(f, 0.5, 1e-3);
  ASSERT_EQ(d.profiles.size(), 2u);
  EXPECT_NEAR(d.profiles[0].mass, 1.0, 0.05);
  EXPECT_NEAR(d.profiles[1].mass, 0.5, 0.05 * 0.5);
  EXPECT_GT(d.profiles[0].mass, d.profiles[1].mass);
  EXPECT_TRUE(d.disjoint);
  EXPECT_GE(d.min_separation_margin, 0.0);
  EXPECT_TRUE(d.bookkeeping_ok);
  EXPECT_LE(d.bookkeeping.back().cumulative_mass, d.sup_mass * (1 + 1e-6));
  for (std::size_t k = 1; k < d.radii.size(); ++k) EXPECT_GE(d.radii[k], d.radii[k - 1]);
  EXPECT_LT(energy_split_defect(f, d, 0.5), 0.01);
}

TEST(Profiles, Errors) {
  PeriodicGrid1D g(512, 256.0);
  ProfileControls c;
  c.max_profiles = 1;
  EXPECT_THROW(profile_decompose(two_bump_family(g, 8), 0.5, 1e-3, c), MaxProfilesExceeded);
  EXPECT_THROW(profile_decompose(two_bump_family(g, 8), 0.5, 0.0), InvalidArgument);
}
