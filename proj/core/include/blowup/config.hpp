#pragma once

#include <string>

#include "blowup/analyzer.hpp"
#include "blowup/simulator.hpp"

namespace blowup::config {

// A full experiment description: the problem, the grid, the initial-data
// family, and the analysis thresholds. Parsed from TOML or JSON files whose
// keys mirror these field names; every field has a sensible default so a
// config file only states what it overrides.
struct RunSpec {
  // problem
  double q = 2.0;
  int n = 2;

  // grid and time integration
  double dx_min = 1e-3;
  double stretch = 1.05;
  double extent = 6.0;
  double cfl = 0.9;
  double u_stop = 200.0;
  double u_gate = 10.0;
  double t_max = 2.0;
  double snapshot_ds = 0.25;

  // initial data: "gaussian" is amplitude * exp(-(r^2+z^2)/width^2);
  // "exact_1d" seeds the exact one-dimensional self-similar solution with
  // nominal blow-up time t_offset (n must be 1).
  std::string u0_family = "gaussian";
  double amplitude = 1.7;
  double width = 1.0;
  double t_offset = 0.01;

  // analysis thresholds
  double resolved_cells = 12.0;
  double plateau_tol = 0.25;
  double drift_tol = 0.10;
  double r2_min = 0.98;
  double span_factor = 4.0;

  simulator::SimConfig sim_config() const;
  analyzer::ClassifyOptions classify_options() const;

  // deterministic key=value rendering; equal specs give equal strings
  std::string canonical() const;
  // 16 hex digits of FNV-1a over canonical(); stamped into every output file
  std::string hash() const;
};

RunSpec parse_json(const std::string& text);
RunSpec parse_toml(const std::string& text);

// dispatches on the file extension (.json vs anything else = TOML)
RunSpec load(const std::string& path);

}  // namespace blowup::config
