#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "bosonstar/io/runner.hpp"

namespace fs = std::filesystem;
using namespace bosonstar;

namespace {

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case Error::Category::Validation:
      return 2;
    case Error::Category::Numerical:
      return 3;
    case Error::Category::Check:
      return 4;
  }
  return 1;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boson star solver, diagnostics and operator laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, out_path;
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--seed", seed, "Random seed");
  app.add_flag("--quiet", quiet, "Suppress the summary line");

  auto* gs = app.add_subcommand("ground-state", "Solve for the ground state and critical mass");
  std::size_t n = 0, max_iter = 0;
  double rmax = 0, tol = 0;
  std::string seed_profile;
  gs->add_option("--n", n, "Grid points");
  gs->add_option("--rmax", rmax, "Domain radius");
  gs->add_option("--tol", tol, "Relative H^{1/2} update tolerance");
  gs->add_option("--max-iter", max_iter, "Iteration cap");
  gs->add_option("--seed-profile", seed_profile, "gaussian | sech | file:<path>");
  gs->add_option("--out", out_path, "Output JSON path");

  auto* ev = app.add_subcommand("evolve", "Integrate the evolution equation from the configured datum");

  auto* dg = app.add_subcommand("diagnose", "Run diagnostics on a stored trajectory");
  std::string trajectory, ground_state, checks;
  dg->add_option("--trajectory", trajectory, "Trajectory JSON")->check(CLI::ExistingFile);
  dg->add_option("--ground-state", ground_state, "Ground state JSON")->check(CLI::ExistingFile);
  dg->add_option("--checks", checks, "all or a comma separated list");
  dg->add_option("--out", out_path, "Report JSON path");

  auto* oc = app.add_subcommand("operator-check", "Dense-matrix checks on a periodic grid");
  std::string suite;
  std::size_t lab_n = 0;
  double lab_s = 0;
  oc->add_option("--suite", suite, "commutator | localization | ims | subcritical | profiles | all");
  oc->add_option("--n", lab_n, "Grid points (even)");
  oc->add_option("--s", lab_s, "Fractional order in (0,1)");
  oc->add_option("--out", out_path, "Report JSON path");

  auto* rn = app.add_subcommand("run", "Run the command named in --config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    io::RunConfig cfg = config_path.empty() ? io::RunConfig{} : io::load_config(config_path);
    auto j = io::config_to_json(cfg);
    if (gs->parsed()) {
      j["command"] = "ground-state";
      if (gs->count("--n")) j["grid"]["n_points"] = n;
      if (gs->count("--rmax")) j["grid"]["r_max"] = rmax;
      if (gs->count("--tol")) j["ground_state"]["tol"] = tol;
      if (gs->count("--max-iter")) j["ground_state"]["max_iter"] = max_iter;
      if (gs->count("--seed-profile")) j["ground_state"]["seed_profile"] = seed_profile;
    } else if (ev->parsed()) {
      j["command"] = "evolve";
    } else if (dg->parsed()) {
      j["command"] = "diagnose";
      if (dg->count("--trajectory")) j["diagnose"]["trajectory"] = trajectory;
      if (dg->count("--ground-state")) j["diagnose"]["ground_state"] = ground_state;
      if (dg->count("--checks")) j["diagnose"]["checks"] = split_list(checks);
    } else if (oc->parsed()) {
      j["command"] = "operator-check";
      if (oc->count("--suite")) j["operator_check"]["suite"] = suite;
      if (oc->count("--n")) j["operator_check"]["n"] = lab_n;
      if (oc->count("--s")) j["operator_check"]["s"] = lab_s;
    } else if (rn->parsed() && config_path.empty()) {
      throw ValidationError({"--config"});
    }
    if (app.count("--seed")) j["seed"] = seed;
    std::string name;
    if (!out_path.empty()) {
      const fs::path p(out_path);
      name = p.filename().string();
      if (p.has_parent_path()) j["out_dir"] = p.parent_path().string();
    }
    if (!out_dir.empty()) j["out_dir"] = out_dir;
    cfg = io::config_from_json(j);

    const auto m = io::run(cfg, name);
    if (!quiet) {
      std::cout << cfg.command << ": exit " << m.exit_code << ", " << m.wall_clock_seconds << " s";
      for (const auto& [file, digest] : m.outputs) std::cout << "\n  " << (fs::path(cfg.out_dir) / file).string() << ' ' << digest.substr(0, 12);
      std::cout << '\n';
    }
    return m.exit_code;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
