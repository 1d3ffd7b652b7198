#pragma once

#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "bosonstar/diagnostics/record.hpp"
#include "bosonstar/evolution.hpp"
#include "bosonstar/ground_state.hpp"

namespace bosonstar::io {

using json = nlohmann::json;

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline json parse_json_file(const std::string& path) {
  const auto text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Sorted keys, two-space indent, trailing newline.
inline std::string canonical(const json& j) { return j.dump(2) + "\n"; }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

// Field

inline json grid_to_json(const RadialGrid& g) { return {{"n_points", g.size()}, {"r_max", g.r_max()}}; }

inline RadialGrid grid_from_json(const json& j) {
  try {
    return RadialGrid(j.at("n_points").get<std::size_t>(), j.at("r_max").get<double>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("grid: ") + e.what());
  }
}

inline json values_to_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

inline json field_to_json(const Field& f) { return {{"grid", grid_to_json(f.grid())}, {"values", values_to_json(f.values())}}; }

inline Field field_from_json(const json& j, const RadialGrid* grid = nullptr) {
  const RadialGrid g = grid ? *grid : grid_from_json(j.at("grid"));
  try {
    const auto& vals = j.at("values");
    if (vals.size() != g.size()) throw ParseError("values length does not match grid");
    std::vector<cplx> v;
    v.reserve(vals.size());
    for (const auto& p : vals) v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return Field(g, std::move(v));
  } catch (const json::exception& e) {
    throw ParseError(std::string("field: ") + e.what());
  }
}

inline std::string field_to_csv(const Field& f) {
  std::ostringstream os;
  os << std::setprecision(17) << "r,re,im\n";
  for (std::size_t j = 0; j < f.size(); ++j) os << f.grid().radius(j) << ',' << f[j].real() << ',' << f[j].imag() << '\n';
  return os.str();
}

// Ground state

inline json ground_state_to_json(const GroundState& gs) {
  return {{"critical_mass", gs.critical_mass},
          {"c_opt", gs.c_opt},
          {"pohozaev_residual", gs.pohozaev_residual},
          {"equation_residual", gs.equation_residual},
          {"iterations", gs.iterations},
          {"final_update_norm", gs.final_update_norm},
          {"q", field_to_json(gs.q)}};
}

inline GroundState ground_state_from_json(const json& j) {
  GroundState gs;
  try {
    gs.critical_mass = j.at("critical_mass").get<double>();
    gs.c_opt = j.at("c_opt").get<double>();
    gs.pohozaev_residual = j.at("pohozaev_residual").get<double>();
    gs.equation_residual = j.at("equation_residual").get<double>();
    gs.iterations = j.at("iterations").get<std::size_t>();
    gs.final_update_norm = j.at("final_update_norm").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("ground state: ") + e.what());
  }
  gs.q = field_from_json(j.at("q"));
  return gs;
}

// Trajectory

inline Termination termination_from_string(const std::string& s) {
  for (auto t : {Termination::HorizonReached, Termination::StepFloor, Termination::NormCap, Termination::Diverged})
    if (s == to_string(t)) return t;
  throw ParseError("unknown termination " + s);
}

inline json controls_to_json(const EvolutionControls& c) {
  return {{"dt0", c.dt0},
          {"t_end", c.t_end},
          {"cfl", c.cfl},
          {"dt_floor", c.dt_floor},
          {"snapshot_stride", c.snapshot_stride},
          {"h_half_cap", c.h_half_cap},
          {"adaptive", c.adaptive},
          {"nonlinear", c.nonlinear},
          {"unresolved_width_factor", c.unresolved_width_factor},
          {"monotone_window", c.monotone_window},
          {"boundary_fraction", c.boundary_fraction}};
}

inline json record_to_json(const StepRecord& r) {
  return {{"step", r.step},
          {"t", r.t},
          {"dt", r.dt},
          {"mass", r.mass},
          {"energy", r.energy},
          {"h_half", r.h_half},
          {"boundary_mass", r.boundary_mass},
          {"kinetic_homogeneous", r.kinetic_homogeneous},
          {"max_potential", r.max_potential},
          {"resolved", r.resolved}};
}

inline StepRecord record_from_json(const json& j) {
  StepRecord r;
  r.step = j.at("step").get<std::size_t>();
  r.t = j.at("t").get<double>();
  r.dt = j.at("dt").get<double>();
  r.mass = j.at("mass").get<double>();
  r.energy = j.at("energy").get<double>();
  r.h_half = j.at("h_half").get<double>();
  r.boundary_mass = j.at("boundary_mass").get<double>();
  r.kinetic_homogeneous = j.at("kinetic_homogeneous").get<double>();
  r.max_potential = j.at("max_potential").get<double>();
  r.resolved = j.at("resolved").get<bool>();
  return r;
}

/// Records plus snapshots; snapshot values share the top-level grid.
inline json trajectory_to_json(const Trajectory& t) {
  json snaps = json::array();
  for (const auto& s : t.snapshots)
    snaps.push_back({{"step", s.step}, {"t", s.t}, {"resolved", s.resolved}, {"values", values_to_json(s.u.values())}});
  json recs = json::array();
  for (const auto& r : t.records) recs.push_back(record_to_json(r));
  return {{"grid", grid_to_json(t.snapshots.front().u.grid())},
          {"params", {{"mass", t.params.mass}}},
          {"controls", controls_to_json(t.controls)},
          {"termination", to_string(t.termination)},
          {"blowup_suspected", t.blowup_suspected},
          {"message", t.message},
          {"records", recs},
          {"snapshots", snaps}};
}

inline Trajectory trajectory_from_json(const json& j) {
  Trajectory t;
  try {
    const auto g = grid_from_json(j.at("grid"));
    t.params.mass = j.at("params").at("mass").get<double>();
    const auto& c = j.at("controls");
    t.controls.dt0 = c.at("dt0").get<double>();
    t.controls.t_end = c.at("t_end").get<double>();
    t.controls.cfl = c.at("cfl").get<double>();
    t.controls.dt_floor = c.at("dt_floor").get<double>();
    t.controls.snapshot_stride = c.at("snapshot_stride").get<std::size_t>();
    t.controls.h_half_cap = c.at("h_half_cap").get<double>();
    t.controls.adaptive = c.at("adaptive").get<bool>();
    t.controls.nonlinear = c.at("nonlinear").get<bool>();
    t.controls.unresolved_width_factor = c.at("unresolved_width_factor").get<double>();
    t.controls.monotone_window = c.at("monotone_window").get<std::size_t>();
    t.controls.boundary_fraction = c.at("boundary_fraction").get<double>();
    t.termination = termination_from_string(j.at("termination").get<std::string>());
    t.blowup_suspected = j.at("blowup_suspected").get<bool>();
    t.message = j.at("message").get<std::string>();
    for (const auto& r : j.at("records")) t.records.push_back(record_from_json(r));
    for (const auto& s : j.at("snapshots"))
      t.snapshots.push_back({s.at("step").get<std::size_t>(), s.at("t").get<double>(), s.at("resolved").get<bool>(),
                             field_from_json(s, &g)});
  } catch (const json::exception& e) {
    throw ParseError(std::string("trajectory: ") + e.what());
  }
  if (t.records.empty() || t.snapshots.empty()) throw ParseError("trajectory has no records or snapshots");
  return t;
}

inline std::string records_to_csv(const Trajectory& t) {
  std::ostringstream os;
  os << std::setprecision(17) << "t,dt,mass,energy,h_half,boundary_mass\n";
  for (const auto& r : t.records)
    os << r.t << ',' << r.dt << ',' << r.mass << ',' << r.energy << ',' << r.h_half << ',' << r.boundary_mass << '\n';
  return os.str();
}

// Check records

inline json check_to_json(const CheckRecord& r) {
  return {{"check", r.check}, {"params", r.params},         {"statistic", r.statistic},
          {"bound", r.bound}, {"pass", r.pass},             {"applicable", r.applicable},
          {"note", r.note}};
}

}  // namespace bosonstar::io
