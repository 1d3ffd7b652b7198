#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "bosonstar/io/serialize.hpp"

namespace bosonstar::io {

struct GridSpec {
  std::size_t n_points = 4096;
  double r_max = 128.0;
};

/// {kind, amplitude, width} or {file}; a positive mass rescales the profile to that mass.
struct InitialDatum {
  std::string kind = "gaussian";
  double amplitude = 1.0;
  double width = 1.0;
  double mass = 0.0;
  std::string file;
};

struct DiagnoseSpec {
  std::string trajectory;
  std::string ground_state;
  std::vector<std::string> checks{"all"};
};

struct LabTolerances {
  double scalar_identity = 1e-8;
  double resolvent_reconstruction = 1e-6;
  double spectrum_floor = 1e-8;
  double ims_floor = 1e-8;
  double classical_ims = 1e-10;
  double dilation_window = 2.0;
  double subcritical_spread = 3.0;
  double profile_mass = 0.05;
  double profile_eps = 1e-3;
  double commutator_safety = 1.25;
  std::size_t calibration_samples = 20;
  std::size_t quadrature_nodes = 64;
  double quadrature_tail = 1e-8;
};

struct OperatorCheckSpec {
  std::string suite = "all";
  std::size_t n = 128;
  double s = 0.5;
};

struct RunConfig {
  std::string command = "ground-state";
  GridSpec grid;
  ModelParams params;
  GroundStateControls ground_state;
  std::string seed_profile = "gaussian";  // gaussian | sech | file:<path>
  InitialDatum u0;
  EvolutionControls controls;
  DiagnosticTolerances tolerances;
  LabTolerances lab;
  DiagnoseSpec diagnose;
  OperatorCheckSpec operator_check;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
};

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"ground-state", "evolve", "diagnose", "operator-check"};
  return c;
}

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> c{"propagation", "tightness", "concentration", "blowup_measure",
                                          "exterior",    "newton",    "virial",        "h_minus1"};
  return c;
}

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> c{"commutator", "localization", "ims", "subcritical", "profiles", "all"};
  return c;
}

namespace detail {

template <class T>
bool contains(const std::vector<T>& v, const T& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

/// Reads an object strictly: every key must be consumed, every violation is collected.
class Reader {
 public:
  Reader(const json& j, std::string prefix, std::vector<std::string>& errors)
      : j_(j), prefix_(std::move(prefix)), errors_(errors) {
    if (!j_.is_object()) errors_.push_back(prefix_.empty() ? "<root>" : prefix_);
  }

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  template <class T, class Pred>
  void get(const std::string& key, T& out, Pred&& ok) {
    if (!j_.is_object()) return;
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      T v = it->template get<T>();
      if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        if (!it->is_number_unsigned()) throw std::runtime_error("not unsigned");
      }
      if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw std::runtime_error("not a number");
      }
      if (!ok(v)) throw std::runtime_error("out of range");
      out = std::move(v);
    } catch (const std::exception&) {
      errors_.push_back(path(key));
    }
  }

  template <class T>
  void get(const std::string& key, T& out) {
    get(key, out, [](const T&) { return true; });
  }

  const json* child(const std::string& key) {
    if (!j_.is_object()) return nullptr;
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() {
    if (!j_.is_object()) return;
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) errors_.push_back(path(k));
  }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

inline bool positive(double x) { return x > 0.0 && std::isfinite(x); }
inline bool nonnegative(double x) { return x >= 0.0 && std::isfinite(x); }
inline bool positive_count(std::size_t x) { return x > 0; }

}  // namespace detail

inline json config_to_json(const RunConfig& c) {
  const auto& t = c.tolerances;
  const auto& l = c.lab;
  return {
      {"command", c.command},
      {"grid", {{"n_points", c.grid.n_points}, {"r_max", c.grid.r_max}}},
      {"params", {{"mass", c.params.mass}}},
      {"ground_state",
       {{"tol", c.ground_state.tol}, {"max_iter", c.ground_state.max_iter}, {"gamma", c.ground_state.gamma},
        {"seed_profile", c.seed_profile}}},
      {"u0",
       {{"kind", c.u0.kind}, {"amplitude", c.u0.amplitude}, {"width", c.u0.width}, {"mass", c.u0.mass},
        {"file", c.u0.file}}},
      {"controls", controls_to_json(c.controls)},
      {"tolerances",
       {{"propagation_kappa", t.propagation_kappa},
        {"concentration_fraction", t.concentration_fraction},
        {"concentration_center_drs", t.concentration_center_drs},
        {"exterior_fraction", t.exterior_fraction},
        {"exterior_radius", t.exterior_radius},
        {"virial_envelope", t.virial_envelope},
        {"virial_fit_residual", t.virial_fit_residual},
        {"newton_slack", t.newton_slack},
        {"cauchy_floor", t.cauchy_floor},
        {"histogram_tol", t.histogram_tol},
        {"tightness_eps_fraction", t.tightness_eps_fraction},
        {"final_window", t.final_window},
        {"histogram_bins", t.histogram_bins}}},
      {"lab",
       {{"scalar_identity", l.scalar_identity},
        {"resolvent_reconstruction", l.resolvent_reconstruction},
        {"spectrum_floor", l.spectrum_floor},
        {"ims_floor", l.ims_floor},
        {"classical_ims", l.classical_ims},
        {"dilation_window", l.dilation_window},
        {"subcritical_spread", l.subcritical_spread},
        {"profile_mass", l.profile_mass},
        {"profile_eps", l.profile_eps},
        {"commutator_safety", l.commutator_safety},
        {"calibration_samples", l.calibration_samples},
        {"quadrature_nodes", l.quadrature_nodes},
        {"quadrature_tail", l.quadrature_tail}}},
      {"diagnose",
       {{"trajectory", c.diagnose.trajectory}, {"ground_state", c.diagnose.ground_state},
        {"checks", c.diagnose.checks}}},
      {"operator_check", {{"suite", c.operator_check.suite}, {"n", c.operator_check.n}, {"s", c.operator_check.s}}},
      {"seed", c.seed},
      {"out_dir", c.out_dir}};
}

/// Strict parse: missing keys take defaults, unknown keys and invalid values are reported together.
inline RunConfig config_from_json(const json& j) {
  using namespace detail;
  RunConfig c;
  std::vector<std::string> errors;
  Reader root(j, "", errors);
  root.get("command", c.command, [](const std::string& s) { return contains(known_commands(), s); });
  root.get("seed", c.seed);
  root.get("out_dir", c.out_dir, [](const std::string& s) { return !s.empty(); });

  if (const auto* g = root.child("grid")) {
    Reader r(*g, "grid", errors);
    r.get("n_points", c.grid.n_points, [](std::size_t n) { return n >= 8; });
    r.get("r_max", c.grid.r_max, positive);
    r.finish();
  }
  if (const auto* p = root.child("params")) {
    Reader r(*p, "params", errors);
    r.get("mass", c.params.mass, nonnegative);
    r.finish();
  }
  if (const auto* p = root.child("ground_state")) {
    Reader r(*p, "ground_state", errors);
    r.get("tol", c.ground_state.tol, positive);
    r.get("max_iter", c.ground_state.max_iter, positive_count);
    r.get("gamma", c.ground_state.gamma, positive);
    r.get("seed_profile", c.seed_profile, [](const std::string& s) {
      return s == "gaussian" || s == "sech" || (s.rfind("file:", 0) == 0 && s.size() > 5);
    });
    r.finish();
  }
  if (const auto* p = root.child("u0")) {
    Reader r(*p, "u0", errors);
    r.get("kind", c.u0.kind, [](const std::string& s) { return s == "gaussian" || s == "sech" || s == "file"; });
    r.get("amplitude", c.u0.amplitude, [](double x) { return std::isfinite(x) && x != 0.0; });
    r.get("width", c.u0.width, positive);
    r.get("mass", c.u0.mass, nonnegative);
    r.get("file", c.u0.file);
    r.finish();
    if (!c.u0.file.empty() && !p->contains("kind")) c.u0.kind = "file";
    if (c.u0.kind == "file" && c.u0.file.empty()) errors.push_back("u0.file");
  }
  if (const auto* p = root.child("controls")) {
    Reader r(*p, "controls", errors);
    auto& k = c.controls;
    r.get("dt0", k.dt0, positive);
    r.get("t_end", k.t_end, nonnegative);
    r.get("cfl", k.cfl, [](double x) { return x > 0.0 && x <= 1.0; });
    r.get("dt_floor", k.dt_floor, positive);
    r.get("snapshot_stride", k.snapshot_stride, positive_count);
    r.get("h_half_cap", k.h_half_cap, positive);
    r.get("adaptive", k.adaptive);
    r.get("nonlinear", k.nonlinear);
    r.get("unresolved_width_factor", k.unresolved_width_factor, positive);
    r.get("monotone_window", k.monotone_window, positive_count);
    r.get("boundary_fraction", k.boundary_fraction, [](double x) { return x > 0.0 && x < 1.0; });
    r.finish();
    if (!(k.dt0 > k.dt_floor)) errors.push_back("controls.dt0");
  }
  if (const auto* p = root.child("tolerances")) {
    Reader r(*p, "tolerances", errors);
    auto& t = c.tolerances;
    r.get("propagation_kappa", t.propagation_kappa, positive);
    r.get("concentration_fraction", t.concentration_fraction, positive);
    r.get("concentration_center_drs", t.concentration_center_drs, positive);
    r.get("exterior_fraction", t.exterior_fraction, positive);
    r.get("exterior_radius", t.exterior_radius, positive);
    r.get("virial_envelope", t.virial_envelope, positive);
    r.get("virial_fit_residual", t.virial_fit_residual, positive);
    r.get("newton_slack", t.newton_slack, positive);
    r.get("cauchy_floor", t.cauchy_floor, positive);
    r.get("histogram_tol", t.histogram_tol, positive);
    r.get("tightness_eps_fraction", t.tightness_eps_fraction, positive);
    r.get("final_window", t.final_window, [](std::size_t n) { return n >= 3; });
    r.get("histogram_bins", t.histogram_bins, positive_count);
    r.finish();
  }
  if (const auto* p = root.child("lab")) {
    Reader r(*p, "lab", errors);
    auto& l = c.lab;
    r.get("scalar_identity", l.scalar_identity, positive);
    r.get("resolvent_reconstruction", l.resolvent_reconstruction, positive);
    r.get("spectrum_floor", l.spectrum_floor, positive);
    r.get("ims_floor", l.ims_floor, positive);
    r.get("classical_ims", l.classical_ims, positive);
    r.get("dilation_window", l.dilation_window, positive);
    r.get("subcritical_spread", l.subcritical_spread, positive);
    r.get("profile_mass", l.profile_mass, positive);
    r.get("profile_eps", l.profile_eps, positive);
    r.get("commutator_safety", l.commutator_safety, positive);
    r.get("calibration_samples", l.calibration_samples, positive_count);
    r.get("quadrature_nodes", l.quadrature_nodes, positive_count);
    r.get("quadrature_tail", l.quadrature_tail, positive);
    r.finish();
  }
  if (const auto* p = root.child("diagnose")) {
    Reader r(*p, "diagnose", errors);
    r.get("trajectory", c.diagnose.trajectory);
    r.get("ground_state", c.diagnose.ground_state);
    r.get("checks", c.diagnose.checks, [](const std::vector<std::string>& v) {
      if (v.empty()) return false;
      for (const auto& s : v)
        if (s != "all" && !contains(known_checks(), s)) return false;
      return true;
    });
    r.finish();
  }
  if (const auto* p = root.child("operator_check")) {
    Reader r(*p, "operator_check", errors);
    r.get("suite", c.operator_check.suite, [](const std::string& s) { return contains(known_suites(), s); });
    r.get("n", c.operator_check.n, [](std::size_t n) { return n >= 16 && n % 2 == 0; });
    r.get("s", c.operator_check.s, [](double s) { return s > 0.0 && s < 1.0; });
    r.finish();
  }
  root.finish();
  if (!errors.empty()) throw ValidationError(errors);
  return c;
}

inline RunConfig load_config(const std::string& path) { return config_from_json(parse_json_file(path)); }

inline std::string canonical_config(const RunConfig& c) { return canonical(config_to_json(c)); }

}  // namespace bosonstar::io
