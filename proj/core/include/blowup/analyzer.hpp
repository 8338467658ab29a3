#pragma once

#include <limits>
#include <string>
#include <vector>

#include "blowup/profile.hpp"
#include "blowup/quadrature.hpp"
#include "blowup/simulator.hpp"
#include "blowup/spectrum.hpp"

namespace blowup::analyzer {

// Projection of phi - phi0 onto a mode in the rho-weighted inner product.
// clipped_mass reports the fraction of the rule's rho-mass outside the
// rescaled grid; above 1e-6 the coefficient is flagged untrustworthy.
struct Projection {
  double a = 0.0;
  double clipped_mass = 0.0;
  bool clipped() const { return clipped_mass > 1e-6; }
};

Projection project(const quad::Fn2& phi, const profile::StationaryProfile& phi0,
                   const spectrum::NeutralMode& mode, const quad::HalfSpaceRule& rule,
                   double y_max = std::numeric_limits<double>::infinity());

struct SpectralTrace {
  std::vector<double> s;      // strictly increasing
  std::vector<double> a0;     // neutral coefficient (v, E)_rho
  std::vector<double> res;    // ||v - a0 E||_rho
  std::vector<double> vnorm;  // ||v||_rho
};

// Projects every resolved snapshot of a blow-up run; snapshots whose
// rescaled feature is under `resolved_cells` grid cells wide are dropped.
SpectralTrace build_trace(const simulator::RunResult& run, const simulator::Mesh1D& mr,
                          const simulator::Mesh1D& mz, const spectrum::Parameters& p,
                          const profile::StationaryProfile& phi0, const spectrum::NeutralMode& mode,
                          const quad::HalfSpaceRule& rule, double resolved_cells = 12.0);

enum class Case { I, II, Inconclusive };

struct ClassifyOptions {
  double plateau_tol = 0.25;  // |s a0| vs nu_q
  double drift_tol = 0.10;    // relative drift over the last factor 2 of s
  double r2_min = 0.98;       // log-linear decay fit
  double span_factor = 4.0;   // required s coverage
};

struct Verdict {
  Case kind = Case::Inconclusive;
  double plateau = 0.0;      // limiting s * a0, signed, log-correction removed
  double plateau_raw = 0.0;  // mean of s * a0 over the last factor 2 of s
  double drift = 0.0;
  double gamma = 0.0;  // case II decay rate
  double r2 = 0.0;
  std::string notes;
};

Verdict classify(const SpectralTrace& trace, double nu, ClassifyOptions opt = {});

// Two-sided band for the rescaled boundary value at |y'| = theta sqrt(s).
struct BandReport {
  double theta = 0.0;
  double k1 = 0.0, k2 = 0.0;  // min and max of phi / B over the window
  bool found = false;         // 0 < k1 <= k2 < 1
  bool degenerate = false;    // ratio identically 1 (stationary solution)
  int n_samples = 0;
};

BandReport check_boundary_band(const simulator::BoundaryTrace& trace, const simulator::Mesh1D& mr,
                        const spectrum::Parameters& p, double T, double theta, double s_lo,
                        double s_hi);
std::vector<BandReport> scan_boundary_band(const simulator::BoundaryTrace& trace,
                                    const simulator::Mesh1D& mr, const spectrum::Parameters& p,
                                    double T, double s_lo, double s_hi);

// Boundary singularity shape: log u(r, 0) against log(|log r| / r^2).
struct ProfileFit {
  double slope = 0.0;
  double r2 = 0.0;
  double r2_pure = 0.0;  // competing pure power law log u vs log r
  double c1 = 0.0, c2 = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
};

ProfileFit fit_boundary_singularity(const simulator::Snapshot& snap, const simulator::Mesh1D& mr,
                                    const simulator::Mesh1D& mz, double q, double r_lo,
                                    double r_hi);

// Power-law fit of u along the ray (r, z) = |x| (sin theta, cos theta).
struct RayFit {
  double theta_ray = 0.0;
  double slope = 0.0;
  double prefactor = 0.0;
  double r2 = 0.0;
};

RayFit fit_interior_profile(const simulator::Snapshot& snap, const simulator::Mesh1D& mr,
                            const simulator::Mesh1D& mz, double q, double theta_ray, double x_lo,
                            double x_hi);

// Derivative monitors in the rescaled variables.
struct DerivativeDiagnostics {
  std::vector<double> s;           // per snapshot
  std::vector<double> grad_sup;    // sup |grad phi|
  std::vector<double> tangential;  // sqrt(s) sup |d_r phi|, |y'| <= R sqrt s, y_n < R
  std::vector<double> s_mid;       // between consecutive snapshots
  std::vector<double> time_deriv;  // s |d_s phi|, |y'| <= sqrt s
  double tau_time_deriv = 0.0;     // Kendall tau of time_deriv on its last half
  bool bounded = false;
};

DerivativeDiagnostics monitor_derivatives(const std::vector<simulator::RescaledField>& snaps,
                                          double R = 2.0);

// Lyapunov functional of the rescaled flow,
//   E[phi] = 1/2 ||grad phi||^2 + (m/2) ||phi||^2 - 1/(q+1) oint phi^{q+1},
// all in the rho-weighted half-space / boundary inner products.
double energy_of(const quad::Fn2& phi, const quad::Fn2& dphi_r, const quad::Fn2& dphi_z,
                 const spectrum::Parameters& p, const quad::HalfSpaceRule& rule,
                 const quad::QuadratureRule& brule);

struct EnergySeries {
  std::vector<double> s, E;
  bool non_increasing = false;
  double max_violation = 0.0;  // largest upward step relative to |E|
};

EnergySeries energy_diagnostic(const std::vector<simulator::RescaledField>& snaps,
                               const spectrum::Parameters& p, const quad::HalfSpaceRule& rule,
                               const quad::QuadratureRule& brule);

}  // namespace blowup::analyzer
