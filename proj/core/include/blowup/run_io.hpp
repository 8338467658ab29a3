#pragma once

#include <string>
#include <vector>

#include "blowup/config.hpp"
#include "blowup/simulator.hpp"

namespace blowup::io {

// On-disk layout of one run directory (all text files carry the config hash):
//   manifest.json              tool version, config hash, config echo
//   grid.json                  mesh generator parameters and cell counts
//   snapshot_NNNN.f64          field values, little-endian float64 row-major
//   snapshot_NNNN.json         sidecar: t, umax, nr, nz, config hash
//   index.csv                  one row per snapshot: idx, t, umax, file
//   trace.f64                  wall rows, little-endian float64, nt x nr
//   trace_index.csv            one row per wall sample: idx, t, umax
//   estimate.json              blow-up time fit and verdict
void save_run(const std::string& dir, const simulator::RunResult& res,
              const simulator::Mesh1D& mr, const simulator::Mesh1D& mz,
              const config::RunSpec& spec);

struct LoadedRun {
  simulator::RunResult result;
  simulator::Mesh1D mesh_r, mesh_z;  // mesh_r is the single-cell sentinel for 1D runs
  config::RunSpec spec;
  std::string hash;
};

LoadedRun load_run(const std::string& dir);

// CSV with a "# config_hash=..." comment line, then the header, then rows
// rendered with round-trip precision. Deterministic for fixed inputs.
void write_csv(const std::string& path, const std::string& hash, const std::string& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace blowup::io
