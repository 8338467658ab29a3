#pragma once

#include <functional>
#include <string>
#include <vector>

#include "blowup/quadrature.hpp"
#include "blowup/spectrum.hpp"

namespace blowup::simulator {

// Cell-centered 1D mesh, geometrically stretched away from the origin so the
// blow-up scale stays resolved while the domain reaches the frozen far field.
struct Mesh1D {
  std::vector<double> centers;
  std::vector<double> faces;   // size centers.size() + 1, faces[0] = 0
  std::vector<double> widths;

  static Mesh1D geometric(double dx_min, double stretch, double length);
  int size() const { return int(centers.size()); }
};

struct SimConfig {
  spectrum::Parameters params;          // q and the spatial dimension n
  double dx_min = 1e-3;                 // first cell width at the origin
  double stretch = 1.05;                // geometric growth of cell widths
  double extent = 6.0;                  // domain size in both directions
  double cfl = 0.9;                     // fraction of the positivity limit
  double u_stop = 200.0;                // stop once ||u||_inf reaches this
  double u_gate = 10.0;                 // dt shrinks ~ ||u||^{-2(q-1)} above this
  double t_max = 2.0;                   // give up (no blow-up) after this time
  double snapshot_ds = 0.25;            // snapshot cadence in s = -log(T-t)
  std::function<double(double, double)> u0;  // initial data u0(r, z)

  void validate() const;  // throws on geometry errors or sign-condition violations
};

struct Snapshot {
  double t = 0.0;
  double umax = 0.0;
  std::vector<double> u;  // row-major, u[ir * nz + iz]
};

struct BoundaryTrace {
  std::vector<double> t;
  std::vector<double> umax;
  std::vector<std::vector<double>> wall;  // wall[k][ir] = u(r_ir, 0) at t[k]
};

struct BlowupEstimate {
  bool blew_up = false;
  double T = 0.0;
  double r2 = 0.0;
  double window_lo = 0.0, window_hi = 0.0;  // ||u||_inf range of the fit
  std::string verdict;                      // "blowup" or "global or slow"
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  BoundaryTrace trace;
  BlowupEstimate estimate;
};

class Simulator {
 public:
  explicit Simulator(SimConfig cfg);

  // one explicit step; dt must respect the positivity limit
  void step(double dt);
  double stable_dt() const;
  double current_dt() const;  // stable dt shrunk by the ||u|| gate

  RunResult run_to_blowup();

  double time() const { return t_; }
  double umax() const;
  const std::vector<double>& field() const { return u_; }
  const Mesh1D& mesh_r() const { return mr_; }
  const Mesh1D& mesh_z() const { return mz_; }
  const SimConfig& config() const { return cfg_; }

  // discrete audit helpers
  double total_mass() const;                 // int u dV over the truncated domain
  double wall_flux() const;                  // boundary production rate, oint u^q
  double tangential_monotonicity() const;    // max of the radial slope (should be <= 0)

 private:
  SimConfig cfg_;
  Mesh1D mr_, mz_;
  int nr_ = 1, nz_ = 0;
  std::vector<double> u_, scratch_;
  std::vector<double> crp_, crm_, czp_, czm_;  // per-axis stencil coefficients
  std::vector<double> vr_;                     // radial volume weights
  double t_ = 0.0;
  double diag_max_ = 0.0;

  double wall_value(int ir) const;  // second-order one-sided wall extrapolation
  double dt_for(double um) const;
};

// Self-similar rescaling of one snapshot: phi(y) = (T-t)^m u(sqrt(T-t) y).
// Wraps a spline interpolant of the physical field; evaluations outside the
// rescaled domain are clamped to the frozen far field.
class RescaledField {
 public:
  RescaledField(const Snapshot& snap, const Mesh1D& mr, const Mesh1D& mz,
                const spectrum::Parameters& p, double T);
  double s() const { return s_; }
  double t() const { return t_; }
  double operator()(double yr, double yz) const;
  double deriv_r(double yr, double yz) const;
  double deriv_z(double yr, double yz) const;
  double y_max() const { return y_max_; }  // rescaled domain radius

 private:
  double s_, t_, scale_, len_, y_max_, m_;
  quad::GridFunction g_;
};

RescaledField rescale_phi(const Snapshot& snap, const Mesh1D& mr, const Mesh1D& mz,
                          const spectrum::Parameters& p, double T);

// Boundary trace of the secondary rescaling
//   v_s(0, t) = e^{-ms} u(theta sqrt(s) e^{-s/2}, 0, T + (t-1) e^{-s}),
// sampled for t in (t1, 1) from the recorded wall rows.
std::vector<std::pair<double, double>> rescale_vs(const BoundaryTrace& trace, const Mesh1D& mr,
                                                  const spectrum::Parameters& p, double T,
                                                  double theta, double s, double t1, int n_samples);

}  // namespace blowup::simulator
