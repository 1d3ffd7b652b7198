#pragma once

#include <map>
#include <string>

namespace bosonstar {

/// One row of a diagnostics report.
struct CheckRecord {
  std::string check;
  std::map<std::string, double> params;
  double statistic = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool applicable = true;
  std::string note;
};

/// Desk-scale slack constants; all live in the run config.
struct DiagnosticTolerances {
  double propagation_kappa = 1.0;        // C_cal per unit initial mass
  double concentration_fraction = 0.9;   // of M_c
  double concentration_center_drs = 3.0;
  double exterior_fraction = 0.05;       // of √mass
  double exterior_radius = 5.0;
  double virial_envelope = 0.1;
  double virial_fit_residual = 0.05;
  double newton_slack = 1e-6;
  double cauchy_floor = 1e-6;
  double histogram_tol = 1e-9;
  double tightness_eps_fraction = 0.01;
  std::size_t final_window = 5;
  std::size_t histogram_bins = 64;
};

}  // namespace bosonstar
