#pragma once

#include <chrono>
#include <filesystem>
#include <random>

#include "bosonstar/diagnostics/checks.hpp"
#include "bosonstar/io/config.hpp"
#include "bosonstar/io/manifest.hpp"
#include "bosonstar/lab/estimates.hpp"
#include "bosonstar/lab/sequences.hpp"

namespace bosonstar::io {

// Inputs

inline Field load_field_file(const std::string& path, const RadialGrid& g, const std::string& field_name) {
  const auto j = parse_json_file(path);
  const Field f = field_from_json(j.contains("q") ? j.at("q") : j);
  if (!(f.grid() == g)) throw ValidationError({field_name});
  return f;
}

inline Field initial_datum(const RunConfig& c, const RadialGrid& g) {
  Field u(g);
  if (c.u0.kind == "file") {
    u = load_field_file(c.u0.file, g, "u0.file");
  } else {
    const double w = c.u0.width, a = c.u0.amplitude;
    const bool sech = c.u0.kind == "sech";
    u = Field::from_function(g, [&](double r) {
      return cplx(a * (sech ? 1.0 / std::cosh(r / w) : std::exp(-r * r / (2 * w * w))), 0.0);
    });
  }
  if (c.u0.mass > 0.0) u *= std::sqrt(c.u0.mass / mass(u));
  return u;
}

// Diagnose

inline CheckRecord simple_record(std::string name, double statistic, double bound, bool pass, std::string note = {}) {
  CheckRecord r;
  r.check = std::move(name);
  r.statistic = statistic;
  r.bound = bound;
  r.pass = pass;
  r.note = std::move(note);
  return r;
}

inline CheckRecord not_applicable(std::string name, std::string why) {
  CheckRecord r;
  r.check = std::move(name);
  r.applicable = false;
  r.pass = true;
  r.note = std::move(why);
  return r;
}

inline std::vector<CheckRecord> diagnose_records(const Trajectory& traj, const GroundState& gs,
                                                 const std::vector<std::string>& checks,
                                                 const DiagnosticTolerances& tol) {
  const auto wanted = [&](const std::string& name) {
    return detail::contains(checks, std::string("all")) || detail::contains(checks, name);
  };
  const bool floor = traj.termination == Termination::StepFloor;
  const auto& g = traj.snapshots.front().u.grid();
  const double m0 = traj.initial_mass();
  std::vector<CheckRecord> out;

  if (wanted("propagation"))
    for (const auto& chi : cutoff_bank(g)) out.push_back(propagation_bound_check(traj, chi, tol.propagation_kappa).record);

  if (wanted("tightness")) {
    const double eps = tol.tightness_eps_fraction * m0;
    try {
      auto r = simple_record("tightness", tightness_check(traj, eps), g.r_max(), true);
      r.params = {{"eps", eps}};
      const auto tail = tightness_tail_profile(traj, eps);
      bool nonincreasing = true;
      for (std::size_t i = 1; i < tail.size(); ++i) nonincreasing = nonincreasing && tail[i] <= tail[i - 1];
      r.params["tail_nonincreasing"] = nonincreasing ? 1.0 : 0.0;
      out.push_back(std::move(r));
    } catch (const NotTightOnGrid& e) {
      out.push_back(simple_record("tightness", g.r_max(), g.r_max(), false, e.what()));
    }
  }

  if (wanted("concentration")) out.push_back(minimal_concentration_check(traj, gs, tol).record);

  if (wanted("blowup_measure")) {
    const auto bm = blowup_measure(traj, tol.histogram_bins, tol.propagation_kappa, tol);
    auto r = simple_record("histogram_mass", bm.max_histogram_error, tol.histogram_tol,
                           bm.max_histogram_error <= tol.histogram_tol);
    r.params = {{"bins", static_cast<double>(tol.histogram_bins)}};
    out.push_back(std::move(r));
    out.insert(out.end(), bm.cauchy.begin(), bm.cauchy.end());
  }

  if (wanted("exterior")) {
    if (floor)
      out.push_back(exterior_convergence_check(traj, tol.exterior_radius, tol).record);
    else
      out.push_back(not_applicable("exterior_convergence", "not applicable: run did not end at the step floor"));
  }

  if (wanted("newton")) out.push_back(newton_bound_check(traj, tol));

  if (wanted("virial")) {
    if (traj.initial_energy() < 0.0)
      out.push_back(virial_check(traj, traj.params, tol).record);
    else
      out.push_back(not_applicable("virial_envelope", "not applicable: initial energy is nonnegative"));
  }

  if (wanted("h_minus1")) {
    const double first = h_minus1_rhs_bound(traj.snapshots.front().u, traj.params);
    double sup = 0.0;
    for (const auto& s : traj.snapshots) sup = std::max(sup, h_minus1_rhs_bound(s.u, traj.params));
    out.push_back(simple_record("h_minus1_bound", sup / first, 3.0, sup <= 3.0 * first));
  }
  return out;
}

// Operator lab

inline std::vector<CheckRecord> operator_check_records(const OperatorCheckSpec& spec, const LabTolerances& tol,
                                                       std::uint64_t seed) {
  using namespace lab;
  const bool all = spec.suite == "all";
  const double s = spec.s;
  const PeriodicGrid1D g(spec.n, 0.5 * static_cast<double>(spec.n));
  QuadratureControls quad;
  quad.nodes = tol.quadrature_nodes;
  quad.tail_tol = tol.quadrature_tail;
  std::mt19937_64 rng(seed);
  std::vector<CheckRecord> out;
  const auto rec = [&](std::string name, double stat, double bound, bool pass, std::map<std::string, double> params) {
    auto r = simple_record(std::move(name), stat, bound, pass);
    r.params = std::move(params);
    out.push_back(std::move(r));
  };

  if (all || spec.suite == "commutator") {
    for (double si : {0.25, 0.5, 0.75, s}) {
      const double err = std::abs(beta_identity(si, quad) - 1.0);
      rec("scalar_identity", err, tol.scalar_identity, err <= tol.scalar_identity, {{"s", si}});
    }
    const double rr = resolvent_reconstruction_error(g, s, quad);
    rec("resolvent_reconstruction", rr, tol.resolvent_reconstruction, rr < tol.resolvent_reconstruction, {{"s", s}});
    for (double si : {s, 1.0}) {
      const double c0 = commutator_norm(g, si, 1.0, constant_function(g, 1.0));
      rec("commutator_constant_cutoff", c0, 1e-12, c0 < 1e-12, {{"s", si}});
      double lo = 1e300, hi = 0.0;
      const PeriodicGrid1D fine(spec.n, 0.25 * static_cast<double>(spec.n));
      for (double r : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        if (r > fine.length() / 8) break;
        const double v = commutator_norm(fine, si, 1.0, dilation_cutoff(fine, r)) * r;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      rec("commutator_dilation", hi / lo, tol.dilation_window, hi / lo <= tol.dilation_window, {{"s", si}});
    }
    const auto cal = calibrate_commutator(g, {s, 1.0}, 1.0, tol.calibration_samples, rng, tol.commutator_safety);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const auto chi = random_smooth_cutoff(g, rng);
      for (double si : {s, 1.0}) worst = std::max(worst, commutator_norm(g, si, 1.0, chi) / chi.grad_inf());
    }
    rec("commutator_calibrated", worst, cal.c_cal, worst <= cal.c_cal,
        {{"max_calibration_ratio", cal.max_ratio}, {"theory_constant", commutator_theory_constant(s)}});
  }

  if (all || spec.suite == "localization") {
    for (int i = 0; i < 10; ++i) {
      const auto rep = localization_defect(g, s, random_smooth_cutoff(g, rng), quad, kDefaultBand, tol.spectrum_floor).report;
      rec("localization_lower", -rep.lambda_min, tol.spectrum_floor, rep.lambda_min >= -tol.spectrum_floor, {{"s", s}});
      rec("localization_upper", rep.lambda_max, rep.bound * (1 + 1e-6), rep.lambda_max <= rep.bound * (1 + 1e-6),
          {{"s", s}});
      rec("double_commutator", rep.double_commutator_norm, rep.double_commutator_bound,
          rep.double_commutator_norm <= rep.double_commutator_bound, {{"s", s}});
    }
  }

  if (all || spec.suite == "ims") {
    const auto part = two_element_partition(g, g.length() / 6, 3.0);
    const auto r = ims_defect(g, s, part, kDefaultBand, tol.ims_floor);
    rec("ims_defect", r.defect, -tol.ims_floor, r.defect >= -tol.ims_floor, {{"s", s}});
    const double cl = classical_ims_residual(g, part);
    rec("classical_ims", cl, tol.classical_ims, cl < tol.classical_ims, {});
  }

  const PeriodicGrid1D seq(512, 256.0);
  if (all || spec.suite == "subcritical") {
    const auto rep = subcritical_check(default_corpus(seq), s, 1.5, tol.subcritical_spread, tol.commutator_safety);
    rec("subcritical_spread", rep.spread, tol.subcritical_spread, rep.pass, {{"s", s}, {"c_cal", rep.c_cal}});
  }

  if (all || spec.suite == "profiles") {
    const auto fam = two_bump_family(seq, 8);
    const auto d = profile_decompose(fam, s, tol.profile_eps);
    const bool two = d.profiles.size() == 2;
    const double e1 = two ? std::abs(d.profiles[0].mass - 1.0) : 1.0;
    const double e2 = two ? std::abs(d.profiles[1].mass - 0.5) / 0.5 : 1.0;
    rec("profile_masses", std::max(e1, e2), tol.profile_mass, two && std::max(e1, e2) <= tol.profile_mass,
        {{"profiles", static_cast<double>(d.profiles.size())}});
    rec("profile_disjointness", -d.min_separation_margin, 0.0, d.disjoint, {});
    rec("profile_bookkeeping", d.bookkeeping.empty() ? 0.0 : d.bookkeeping.back().cumulative_mass, d.sup_mass * (1 + 1e-6),
        d.bookkeeping_ok, {});
    const double split = energy_split_defect(fam, d, s);
    rec("energy_split", split, 0.01, split < 0.01, {{"s", s}});
  }
  return out;
}

inline json records_to_json(const std::vector<CheckRecord>& rs) {
  json a = json::array();
  for (const auto& r : rs) a.push_back(check_to_json(r));
  return a;
}

inline bool all_pass(const std::vector<CheckRecord>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CheckRecord& r) { return r.pass; });
}

// Run

/// Dispatches on config.command, writes outputs and manifest.json under out_dir.
/// exit_code is 4 when any check record fails, 0 otherwise.
inline RunManifest run(const RunConfig& c, const std::string& output_name = {}) {
  namespace fs = std::filesystem;
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  RunManifest m;
  m.config = config_to_json(c);
  const auto emit = [&](const std::string& default_name, const std::string& text) {
    const std::string name = output_name.empty() ? default_name : output_name;
    write_text((dir / name).string(), text);
    m.outputs[name] = sha256_hex(text);
  };
  const auto input = [&](const std::string& path) { m.inputs[path] = file_digest(path); };

  if (c.command == "ground-state") {
    const RadialGrid g(c.grid.n_points, c.grid.r_max);
    GroundState gs;
    if (c.seed_profile.rfind("file:", 0) == 0) {
      const auto path = c.seed_profile.substr(5);
      input(path);
      gs = solve_ground_state(g, c.ground_state, load_field_file(path, g, "ground_state.seed_profile"));
    } else {
      const auto p = c.seed_profile == "sech" ? SeedProfile::Sech : SeedProfile::Gaussian;
      gs = solve_ground_state(g, c.ground_state, make_seed(g, p));
    }
    emit("ground_state.json", canonical(ground_state_to_json(gs)));
  } else if (c.command == "evolve") {
    const RadialGrid g(c.grid.n_points, c.grid.r_max);
    if (c.u0.kind == "file") input(c.u0.file);
    const auto traj = evolve(initial_datum(c, g), c.params, c.controls);
    write_text((dir / "trajectory.csv").string(), records_to_csv(traj));
    m.outputs["trajectory.csv"] = file_digest((dir / "trajectory.csv").string());
    emit("trajectory.json", canonical(trajectory_to_json(traj)));
    if (traj.termination == Termination::Diverged) m.exit_code = 3;
  } else if (c.command == "diagnose") {
    if (c.diagnose.trajectory.empty() || c.diagnose.ground_state.empty())
      throw ValidationError({c.diagnose.trajectory.empty() ? "diagnose.trajectory" : "diagnose.ground_state"});
    input(c.diagnose.trajectory);
    input(c.diagnose.ground_state);
    const auto traj = trajectory_from_json(parse_json_file(c.diagnose.trajectory));
    const auto gs = ground_state_from_json(parse_json_file(c.diagnose.ground_state));
    const auto recs = diagnose_records(traj, gs, c.diagnose.checks, c.tolerances);
    emit("report.json", canonical(records_to_json(recs)));
    if (!all_pass(recs)) m.exit_code = 4;
  } else if (c.command == "operator-check") {
    const auto recs = operator_check_records(c.operator_check, c.lab, c.seed);
    emit("report.json", canonical(records_to_json(recs)));
    if (!all_pass(recs)) m.exit_code = 4;
  } else {
    throw ValidationError({"command"});
  }
  m.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text((dir / "manifest.json").string(), canonical(manifest_to_json(m)));
  return m;
}

}  // namespace bosonstar::io
