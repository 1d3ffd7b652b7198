#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "bosonstar/lab/periodic.hpp"

namespace bosonstar::lab {

using Samples = std::vector<cplx>;

inline double l2_mass(const PeriodicGrid1D& g, const Samples& u) {
  double s = 0.0;
  for (const auto& v : u) s += std::norm(v);
  return s * g.spacing();
}

inline double lp_power(const PeriodicGrid1D& g, const Samples& u, double p) {
  double s = 0.0;
  for (const auto& v : u) s += std::pow(std::abs(v), p);
  return s * g.spacing();
}

/// ⟨u,(a−Δ)^s u⟩ evaluated in the Fourier basis.
class SobolevForm {
 public:
  SobolevForm(const PeriodicGrid1D& g, double s, double a = 1.0) : grid_(g), f_(fourier_matrix(g)), sym_(g.size()) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double k = (j == g.size() / 2) ? g.nyquist() : g.frequency(j);
      sym_(static_cast<Eigen::Index>(j)) = std::pow(a + k * k, s);
    }
  }
  double operator()(const Samples& u) const {
    const Eigen::VectorXcd c = f_ * Eigen::Map<const Eigen::VectorXcd>(u.data(), static_cast<Eigen::Index>(u.size()));
    return grid_.spacing() * (sym_.array() * c.array().abs2()).sum();
  }

 private:
  PeriodicGrid1D grid_;
  Matrix f_;
  Eigen::VectorXd sym_;
};

/// Nearest-image distance on the period.
inline double periodic_distance(const PeriodicGrid1D& g, double x, double y) {
  const double L = g.length();
  double d = std::fmod(std::abs(x - y), L);
  return std::min(d, L - d);
}

struct SequenceFamily {
  PeriodicGrid1D grid;
  std::vector<Samples> members;
  std::string description;
  double hs_order = 0.5;
  double hs_sup = 0.0;

  SequenceFamily(PeriodicGrid1D g, std::vector<Samples> m, std::string desc, double s = 0.5,
                 double hs_limit = std::numeric_limits<double>::infinity())
      : grid(std::move(g)), members(std::move(m)), description(std::move(desc)), hs_order(s) {
    if (members.empty()) throw InvalidArgument("sequence family has no members");
    const SobolevForm form(grid, hs_order);
    for (const auto& u : members) {
      if (u.size() != grid.size()) throw InvalidArgument("member size does not match grid");
      for (const auto& v : u)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NonFinite("non-finite member sample");
      hs_sup = std::max(hs_sup, form(u));
    }
    if (!(hs_sup <= hs_limit)) throw InvalidArgument("H^s norms exceed the uniform bound");
  }

  std::size_t tail_begin() const { return members.size() / 2; }
};

inline Samples gaussian_bump(const PeriodicGrid1D& g, double center, double mass, double width) {
  const double amp = std::sqrt(mass / (std::sqrt(std::numbers::pi) * width));
  Samples u(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double d = periodic_distance(g, g.x(j), center) / width;
    u[j] = amp * std::exp(-0.5 * d * d);
  }
  return u;
}

inline Samples sech_bump(const PeriodicGrid1D& g, double center, double mass, double width) {
  const double amp = std::sqrt(mass / (2.0 * width));
  Samples u(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    u[j] = amp / std::cosh(periodic_distance(g, g.x(j), center) / width);
  return u;
}

inline SequenceFamily fixed_family(const PeriodicGrid1D& g, std::size_t count, double mass = 1.0, double width = 1.0) {
  return {g, std::vector<Samples>(count, gaussian_bump(g, 0.0, mass, width)), "fixed gaussian"};
}

/// uₙ = bump(· − n·step)
inline SequenceFamily translated_family(const PeriodicGrid1D& g, std::size_t count, double step, double mass = 1.0,
                                        double width = 1.0) {
  std::vector<Samples> m;
  for (std::size_t n = 1; n <= count; ++n) m.push_back(gaussian_bump(g, step * static_cast<double>(n), mass, width));
  return {g, std::move(m), "translated gaussian"};
}

inline SequenceFamily translated_sech_family(const PeriodicGrid1D& g, std::size_t count, double step,
                                             double mass = 1.0, double width = 1.0) {
  std::vector<Samples> m;
  for (std::size_t n = 1; n <= count; ++n) m.push_back(sech_bump(g, step * static_cast<double>(n), mass, width));
  return {g, std::move(m), "translated sech"};
}

/// uₙ(x) = n^{-1/2} bump(x/n)
inline SequenceFamily spreading_family(const PeriodicGrid1D& g, std::size_t count, double mass = 1.0,
                                       double width = 1.0) {
  std::vector<Samples> m;
  for (std::size_t n = 1; n <= count; ++n)
    m.push_back(gaussian_bump(g, 0.0, mass, width * static_cast<double>(n)));
  return {g, std::move(m), "spreading gaussian"};
}

/// Bumps at ∓(sep/2)·n with masses m₁, m₂.
inline SequenceFamily two_bump_family(const PeriodicGrid1D& g, std::size_t count, double m1 = 1.0, double m2 = 0.5,
                                      double separation = 10.0, double width = 1.0) {
  std::vector<Samples> m;
  for (std::size_t n = 1; n <= count; ++n) {
    const double half = 0.5 * separation * static_cast<double>(n);
    auto a = gaussian_bump(g, -half, m1, width);
    const auto b = gaussian_bump(g, half, m2, width);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
    m.push_back(std::move(a));
  }
  return {g, std::move(m), "two gaussians"};
}

inline SequenceFamily translate(const SequenceFamily& f, double shift) {
  const auto steps = static_cast<std::ptrdiff_t>(std::llround(shift / f.grid.spacing()));
  const auto n = static_cast<std::ptrdiff_t>(f.grid.size());
  std::vector<Samples> m;
  for (const auto& u : f.members) {
    Samples v(u.size());
    for (std::ptrdiff_t j = 0; j < n; ++j) v[static_cast<std::size_t>(((j + steps) % n + n) % n)] = u[static_cast<std::size_t>(j)];
    m.push_back(std::move(v));
  }
  return {f.grid, std::move(m), f.description + " (translated)", f.hs_order};
}

struct LocalMass {
  std::size_t index = 0;
  double center = 0.0;
  double mass = 0.0;
};

/// sup_y ∫_{|x−y|≤R}|u|² over grid centres; ties go to the smaller coordinate.
inline LocalMass local_mass_maximizer(const PeriodicGrid1D& g, const Samples& u, double radius) {
  const std::size_t n = g.size();
  const auto half = static_cast<std::size_t>(std::floor(radius / g.spacing() + 1e-9));
  LocalMass best;
  if (2 * half + 1 >= n) {
    best.mass = l2_mass(g, u);
    best.center = g.x(0);
    return best;
  }
  std::vector<double> prefix(2 * n + 1, 0.0);
  for (std::size_t j = 0; j < 2 * n; ++j) prefix[j + 1] = prefix[j] + std::norm(u[j % n]);
  best.mass = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lo = j + n - half, hi = j + n + half + 1;
    const double m = (hi <= 2 * n ? prefix[hi] - prefix[lo] : prefix[2 * n] - prefix[lo] + prefix[hi - 2 * n]) * g.spacing();
    if (m > best.mass * (1 + 1e-12) + 1e-300) best = {j, g.x(j), m};
  }
  return best;
}

/// max over the last half of members of sup_y ∫_{|x−y|≤R}|uₙ|².
inline double highest_local_mass(const SequenceFamily& f, double radius) {
  double out = 0.0;
  for (std::size_t k = f.tail_begin(); k < f.members.size(); ++k)
    out = std::max(out, local_mass_maximizer(f.grid, f.members[k], radius).mass);
  return out;
}

struct SubcriticalRecord {
  std::string family;
  double lhs = 0.0;  // max ‖uₙ‖_q^q over the tail
  double local_mass = 0.0;
  double hs_tail = 0.0;
  double ratio = 0.0;
};

/// lhs / (𝐌^{2s}·max‖uₙ‖²_{H^s}) with q = 2 + 4s in d = 1; all factors over the last half of members.
inline SubcriticalRecord subcritical_ratio(const SequenceFamily& f, double s, double window = 1.5) {
  SubcriticalRecord r;
  r.family = f.description;
  const SobolevForm form(f.grid, s);
  for (std::size_t k = f.tail_begin(); k < f.members.size(); ++k) {
    r.lhs = std::max(r.lhs, lp_power(f.grid, f.members[k], 2.0 + 4.0 * s));
    r.hs_tail = std::max(r.hs_tail, form(f.members[k]));
  }
  r.local_mass = highest_local_mass(f, window);
  const double denom = std::pow(r.local_mass, 2.0 * s) * r.hs_tail;
  if (!(denom > 0.0)) throw ZeroField();
  r.ratio = r.lhs / denom;
  return r;
}

/// Fixed, translated, two-bump and vanishing families on a common grid.
inline std::vector<SequenceFamily> default_corpus(const PeriodicGrid1D& g, std::size_t count = 8) {
  return {fixed_family(g, count),         translated_family(g, count, 7.0), translated_sech_family(g, count, 5.0),
          two_bump_family(g, count),      spreading_family(g, count),       fixed_family(g, count, 2.0)};
}

struct SubcriticalReport {
  std::vector<SubcriticalRecord> records;
  double c_cal = 0.0;
  double spread = 0.0;  // max ratio / min ratio
  bool pass = false;
};

inline SubcriticalReport subcritical_check(const std::vector<SequenceFamily>& corpus, double s, double window = 1.5,
                                           double max_spread = 3.0, double safety = 1.25) {
  SubcriticalReport rep;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& f : corpus) {
    rep.records.push_back(subcritical_ratio(f, s, window));
    lo = std::min(lo, rep.records.back().ratio);
    hi = std::max(hi, rep.records.back().ratio);
  }
  rep.c_cal = safety * hi;
  rep.spread = hi / lo;
  rep.pass = !rep.records.empty() && rep.spread <= max_spread;
  for (const auto& r : rep.records) rep.pass = rep.pass && r.ratio <= rep.c_cal;
  return rep;
}

/// 1 on |x| ≤ R/2, 0 on |x| ≥ R.
inline double inner_cutoff(double dist, double radius) {
  const double t = (dist - 0.5 * radius) / (0.5 * radius);
  if (t <= 0) return 1.0;
  if (t >= 1) return 0.0;
  const auto h = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
  return h(1 - t) / (h(1 - t) + h(t));
}

/// 0 on |x| ≤ 2R, 1 on |x| ≥ 4R.
inline double outer_cutoff(double dist, double radius) { return 1.0 - inner_cutoff(dist, 8.0 * radius); }

struct ProfileControls {
  double base_radius = 2.0;
  double stop_window = 4.0;
  std::size_t max_profiles = 32;
};

struct Profile {
  Samples v;                    // recentred at the origin
  std::vector<double> centers;  // xₖʲ per tail member
  double mass = 0.0;
};

struct BookkeepingRow {
  std::size_t round = 0;
  double profile_mass = 0.0;
  double cumulative_mass = 0.0;
  double remainder_local_mass = 0.0;
};

struct ProfileDecomposition {
  std::vector<Profile> profiles;
  std::vector<double> radii;  // R_k per tail member
  SequenceFamily remainder;
  std::vector<BookkeepingRow> bookkeeping;
  std::vector<Samples> last_member_pieces;  // profiles in place on the last member
  double sup_mass = 0.0;
  double min_separation_margin = std::numeric_limits<double>::infinity();  // min |xʲ − xʲ'| − 5R_k
  bool disjoint = true;
  bool bookkeeping_ok = true;
};

/// Extracts bumps at the local-mass maximiser of each tail member until the remainder is below eps.
inline ProfileDecomposition profile_decompose(const SequenceFamily& f, double s, double eps,
                                              const ProfileControls& c = {}) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  const auto& g = f.grid;
  const std::size_t first = f.tail_begin(), count = f.members.size() - first;
  std::vector<double> radii(count);
  for (std::size_t k = 0; k < count; ++k)
    radii[k] = c.base_radius * std::exp2(std::floor(std::log2(static_cast<double>(k + 1))));

  std::vector<Samples> rem(f.members.begin() + static_cast<std::ptrdiff_t>(first), f.members.end());
  ProfileDecomposition out{{}, radii, SequenceFamily(g, rem, f.description + " remainder", s), {}, {}, 0.0};
  for (const auto& u : f.members) out.sup_mass = std::max(out.sup_mass, l2_mass(g, u));

  double cumulative = 0.0;
  while (highest_local_mass(out.remainder, c.stop_window) > eps) {
    if (out.profiles.size() >= c.max_profiles) throw MaxProfilesExceeded("profile cap reached");
    Profile p;
    for (std::size_t k = 0; k < count; ++k) {
      const auto peak = local_mass_maximizer(g, rem[k], 0.5 * radii[k]);
      p.centers.push_back(peak.center);
      Samples piece(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double d = periodic_distance(g, g.x(j), peak.center);
        piece[j] = inner_cutoff(d, radii[k]) * rem[k][j];
        rem[k][j] *= outer_cutoff(d, radii[k]);
      }
      if (k + 1 == count) {
        p.mass = l2_mass(g, piece);
        out.last_member_pieces.push_back(piece);
        const auto n = g.size();
        p.v.assign(n, cplx{});
        for (std::size_t j = 0; j < n; ++j) p.v[(j + n - peak.index + n / 2) % n] = piece[j];
      }
    }
    for (const auto& q : out.profiles)
      for (std::size_t k = 0; k < count; ++k) {
        const double margin = periodic_distance(g, q.centers[k], p.centers[k]) - 5.0 * radii[k];
        out.min_separation_margin = std::min(out.min_separation_margin, margin);
        if (margin < 0) out.disjoint = false;
      }
    cumulative += p.mass;
    out.profiles.push_back(std::move(p));
    out.remainder = SequenceFamily(g, rem, f.description + " remainder", s);
    out.bookkeeping.push_back({out.profiles.size(), out.profiles.back().mass, cumulative,
                               highest_local_mass(out.remainder, c.stop_window)});
  }
  out.bookkeeping_ok = cumulative <= out.sup_mass * (1 + 1e-6);
  return out;
}

/// |⟨u,Au⟩ − Σⱼ⟨vʲ,Avʲ⟩ − ⟨r,Ar⟩| / ⟨u,Au⟩ on the last member, A = (a−Δ)^s.
inline double energy_split_defect(const SequenceFamily& f, const ProfileDecomposition& d, double s, double a = 1.0) {
  const SobolevForm form(f.grid, s, a);
  const double whole = form(f.members.back());
  double parts = form(d.remainder.members.back());
  for (const auto& p : d.last_member_pieces) parts += form(p);
  return std::abs(whole - parts) / whole;
}

}  // namespace bosonstar::lab
