#include "blowup/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blowup::analyzer {

namespace {

struct LineFit {
  double a = 0, b = 0, r2 = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = int(x.size());
  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.b = sxy / sxx;
  f.a = my - f.b * mx;
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

double kendall_tau(const std::vector<double>& x) {
  const int n = int(x.size());
  if (n < 2) return 0.0;
  long concordant = 0, discordant = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (x[j] > x[i]) ++concordant;
      else if (x[j] < x[i]) ++discordant;
    }
  return double(concordant - discordant) / (0.5 * n * (n - 1));
}

double wall_of(const simulator::Snapshot& snap, int nz, int ir) {
  return std::max(0.0, 1.5 * snap.u[size_t(ir) * nz] - 0.5 * snap.u[size_t(ir) * nz + 1]);
}

}  // namespace

Projection project(const quad::Fn2& phi, const profile::StationaryProfile& phi0,
                   const spectrum::NeutralMode& mode, const quad::HalfSpaceRule& rule,
                   double y_max) {
  Projection out;
  out.a = rule.apply([&](double r, double z) { return (phi(r, z) - phi0(z)) * mode(r, z); });
  if (std::isfinite(y_max)) {
    double inside = 0, total = 0;
    for (size_t i = 0; i < rule.radial.nodes.size(); ++i)
      for (size_t j = 0; j < rule.normal.nodes.size(); ++j) {
        const double w = rule.radial.weights[i] * rule.normal.weights[j];
        total += w;
        if (rule.radial.nodes[i] <= y_max && rule.normal.nodes[j] <= y_max) inside += w;
      }
    out.clipped_mass = 1.0 - inside / total;
  }
  return out;
}

SpectralTrace build_trace(const simulator::RunResult& run, const simulator::Mesh1D& mr,
                          const simulator::Mesh1D& mz, const spectrum::Parameters& p,
                          const profile::StationaryProfile& phi0, const spectrum::NeutralMode& mode,
                          const quad::HalfSpaceRule& rule, double resolved_cells) {
  if (!run.estimate.blew_up) throw std::invalid_argument("run did not blow up");
  const double T = run.estimate.T;
  const double dx = mz.widths.front();
  SpectralTrace tr;
  for (const auto& snap : run.snapshots) {
    const double tau = T - snap.t;
    if (tau <= 0 || std::sqrt(tau) < resolved_cells * dx) continue;
    const simulator::RescaledField phi = simulator::rescale_phi(snap, mr, mz, p, T);
    const auto v = [&](double r, double z) { return phi(r, z) - phi0(z); };
    const double a0 = quad::inner_rho(v, [&](double r, double z) { return mode(r, z); }, rule);
    const double res = quad::norm_rho([&](double r, double z) { return v(r, z) - a0 * mode(r, z); }, rule);
    const double vn = quad::norm_rho(v, rule);
    if (!tr.s.empty() && phi.s() <= tr.s.back()) continue;
    tr.s.push_back(phi.s());
    tr.a0.push_back(a0);
    tr.res.push_back(res);
    tr.vnorm.push_back(vn);
  }
  return tr;
}

Verdict classify(const SpectralTrace& trace, double nu, ClassifyOptions opt) {
  const int n = int(trace.s.size());
  if (n < 8 || trace.s.back() / trace.s.front() < opt.span_factor)
    throw std::invalid_argument("trace must span at least the required factor in s");
  Verdict v;

  // case I: |s a0| plateaus over the last factor 2 of s. The plateau carries
  // a slowly decaying ln(s)/s correction, so the limit is extracted by a
  // two-parameter fit s a0 = P (1 + c ln s / s) over the whole trace.
  const double s_cut = trace.s.back() / 2.0;
  std::vector<double> sa, s_res;
  for (int i = 0; i < n; ++i) {
    if (trace.s[i] < s_cut) continue;
    sa.push_back(trace.s[i] * trace.a0[i]);
    if (!trace.res.empty()) s_res.push_back(trace.s[i] * trace.res[i]);
  }
  if (sa.size() >= 4) {
    double mean = 0;
    for (double x : sa) mean += x;
    mean /= double(sa.size());
    v.plateau_raw = mean;
    double slope_c = 0.0;
    {  // least squares of s a0 against 1 and ln s / s, early transient excluded
      const double s_fit = trace.s.back() / 2.5;
      double s11 = 0, s1x = 0, sxx = 0, s1y = 0, sxy = 0;
      for (int i = 0; i < n; ++i) {
        if (trace.s[i] < s_fit) continue;
        const double x = std::log(trace.s[i]) / trace.s[i];
        const double y = trace.s[i] * trace.a0[i];
        s11 += 1, s1x += x, sxx += x * x, s1y += y, sxy += x * y;
      }
      const double det = s11 * sxx - s1x * s1x;
      v.plateau = det != 0 ? (sxx * s1y - s1x * sxy) / det : mean;
      slope_c = det != 0 ? (s11 * sxy - s1x * s1y) / det : 0.0;
    }
    // drift of the plateau after the fitted log correction is removed; a
    // constant-model drift would penalize the slow decay itself
    {
      double dlo = 1e300, dhi = -1e300;
      for (int i = 0; i < n; ++i) {
        if (trace.s[i] < s_cut) continue;
        const double y = trace.s[i] * trace.a0[i] - slope_c * std::log(trace.s[i]) / trace.s[i];
        dlo = std::min(dlo, y), dhi = std::max(dhi, y);
      }
      v.drift = (dhi - dlo) / std::abs(v.plateau);
    }
    const bool near_nu = std::abs(std::abs(v.plateau) - nu) / nu < opt.plateau_tol;
    const bool residual_subdominant =
        s_res.empty() || kendall_tau(s_res) <= 0.0 || s_res.back() < 0.5 * std::abs(mean);
    if (v.drift < opt.drift_tol && near_nu && residual_subdominant) {
      v.kind = Case::I;
      v.notes = v.plateau < 0 ? "neutral coefficient is negative" : "neutral coefficient is positive";
      return v;
    }
  }

  // case II: log-linear decay of ||v|| over the last half of the trace.
  // the exponential model must also beat an algebraic ||v|| ~ s^-p fit,
  // otherwise a slow 1/s tail would masquerade as exponential decay.
  std::vector<double> xs, xs_alg, ys;
  for (int i = 0; i < n; ++i) {
    if (trace.s[i] < s_cut || trace.vnorm[i] <= 0) continue;
    xs.push_back(trace.s[i]);
    xs_alg.push_back(std::log(trace.s[i]));
    ys.push_back(std::log(trace.vnorm[i]));
  }
  if (xs.size() >= 4) {
    const LineFit f = fit_line(xs, ys);
    const LineFit alg = fit_line(xs_alg, ys);
    if (f.r2 > opt.r2_min && f.b < 0 && f.r2 > alg.r2) {
      v.kind = Case::II;
      v.gamma = -f.b;
      v.r2 = f.r2;
      return v;
    }
    v.gamma = -f.b;
    v.r2 = f.r2;
  }
  v.kind = Case::Inconclusive;
  return v;
}

BandReport check_boundary_band(const simulator::BoundaryTrace& trace, const simulator::Mesh1D& mr,
                        const spectrum::Parameters& p, double T, double theta, double s_lo,
                        double s_hi) {
  BandReport rep;
  rep.theta = theta;
  rep.k1 = 1e300;
  rep.k2 = -1e300;
  bool all_unit = true;
  for (size_t k = 0; k < trace.t.size(); ++k) {
    const double tau = T - trace.t[k];
    if (tau <= 0) continue;
    const double s = -std::log(tau);
    if (s < s_lo || s > s_hi) continue;
    const double rstar = theta * std::sqrt(s * tau);
    if (rstar > mr.centers.back()) throw std::invalid_argument("probe radius exceeds the grid");
    // linear interpolation of the wall row at rstar
    const auto& row = trace.wall[k];
    double uw;
    if (mr.centers.size() == 1 || rstar <= mr.centers.front()) uw = row[0];
    else {
      const int i =
          std::clamp(int(std::upper_bound(mr.centers.begin(), mr.centers.end(), rstar) -
                         mr.centers.begin()) - 1, 0, int(mr.centers.size()) - 2);
      const double w = (rstar - mr.centers[i]) / (mr.centers[i + 1] - mr.centers[i]);
      uw = (1 - w) * row[i] + w * row[i + 1];
    }
    const double ratio = std::pow(tau, p.m) * uw / p.B;
    rep.k1 = std::min(rep.k1, ratio);
    rep.k2 = std::max(rep.k2, ratio);
    if (std::abs(ratio - 1.0) > 1e-3) all_unit = false;
    ++rep.n_samples;
  }
  if (rep.n_samples == 0) throw std::invalid_argument("no trace samples in the s window");
  rep.degenerate = all_unit;
  rep.found = !rep.degenerate && rep.k1 > 0.0 && rep.k2 < 1.0;
  return rep;
}

std::vector<BandReport> scan_boundary_band(const simulator::BoundaryTrace& trace,
                                    const simulator::Mesh1D& mr, const spectrum::Parameters& p,
                                    double T, double s_lo, double s_hi) {
  std::vector<BandReport> out;
  for (double theta : {0.3, 0.5, 0.8, 1.0})
    out.push_back(check_boundary_band(trace, mr, p, T, theta, s_lo, s_hi));
  return out;
}

ProfileFit fit_boundary_singularity(const simulator::Snapshot& snap, const simulator::Mesh1D& mr,
                                    const simulator::Mesh1D& mz, double q, double r_lo,
                                    double r_hi) {
  if (r_lo <= 0 || r_hi >= 1 || std::log10(r_hi / r_lo) < 0.5)
    throw std::invalid_argument("fit window must span half a decade inside (0, 1)");
  const int nz = mz.size();
  const double m = 1.0 / (2.0 * (q - 1.0));
  ProfileFit fit;
  fit.window_lo = r_lo;
  fit.window_hi = r_hi;
  fit.c1 = 1e300;
  fit.c2 = -1e300;
  std::vector<double> xs, ys, xs_pure;
  for (int i = 0; i < mr.size(); ++i) {
    const double r = mr.centers[i];
    if (r < r_lo || r > r_hi) continue;
    const double u = wall_of(snap, nz, i);
    if (u <= 0) continue;
    const double model = std::abs(std::log(r)) / (r * r);
    xs.push_back(std::log(model));
    xs_pure.push_back(std::log(r));
    ys.push_back(std::log(u));
    const double c = u * std::pow(model, -m);
    fit.c1 = std::min(fit.c1, c);
    fit.c2 = std::max(fit.c2, c);
  }
  if (xs.size() < 8) throw std::invalid_argument("too few wall samples in the window");
  const LineFit f = fit_line(xs, ys);
  fit.slope = f.b;
  fit.r2 = f.r2;
  fit.r2_pure = fit_line(xs_pure, ys).r2;
  return fit;
}

RayFit fit_interior_profile(const simulator::Snapshot& snap, const simulator::Mesh1D& mr,
                            const simulator::Mesh1D& mz, double q, double theta_ray, double x_lo,
                            double x_hi) {
  if (theta_ray < 0 || theta_ray > 1.4)
    throw std::invalid_argument("ray angle must stay away from the boundary direction");
  if (x_hi * std::max(std::sin(theta_ray), std::cos(theta_ray)) > mz.centers.back())
    throw std::invalid_argument("ray exits the grid");
  std::vector<double> raxis = mr.centers.size() > 1 ? mr.centers : std::vector<double>{};
  const quad::GridFunction g(raxis, mz.centers, snap.u);
  std::vector<double> xs, ys;
  const int npts = 48;
  for (int k = 0; k < npts; ++k) {
    const double x = x_lo * std::pow(x_hi / x_lo, (k + 0.5) / npts);
    const double r = std::max(x * std::sin(theta_ray), g.is1d() ? 0.0 : mr.centers.front());
    const double z = std::max(x * std::cos(theta_ray), mz.centers.front());
    const double u = g.is1d() ? g.eval1d(z) : g(r, z);
    if (u <= 0) continue;
    xs.push_back(std::log(x));
    ys.push_back(std::log(u));
  }
  if (xs.size() < 8) throw std::invalid_argument("too few positive samples along the ray");
  const LineFit f = fit_line(xs, ys);
  RayFit out;
  out.theta_ray = theta_ray;
  out.slope = f.b;
  out.prefactor = std::exp(f.a);
  out.r2 = f.r2;
  return out;
}

DerivativeDiagnostics monitor_derivatives(const std::vector<simulator::RescaledField>& snaps,
                                          double R) {
  if (snaps.size() < 3) throw std::invalid_argument("need at least three snapshots");
  DerivativeDiagnostics d;
  const int ns = 24;
  for (const auto& phi : snaps) {
    const double s = phi.s();
    const double rmax = R * std::sqrt(s);
    double grad = 0, tang = 0;
    for (int i = 0; i <= ns; ++i)
      for (int j = 0; j <= ns; ++j) {
        const double yr = rmax * i / ns;
        const double yz = R * j / ns;
        const double dr = phi.deriv_r(yr, yz), dz = phi.deriv_z(yr, yz);
        grad = std::max(grad, std::hypot(dr, dz));
        tang = std::max(tang, std::abs(dr));
      }
    d.s.push_back(s);
    d.grad_sup.push_back(grad);
    d.tangential.push_back(std::sqrt(s) * tang);
  }
  for (size_t k = 0; k + 1 < snaps.size(); ++k) {
    const auto& f1 = snaps[k];
    const auto& f2 = snaps[k + 1];
    const double s_mid = 0.5 * (f1.s() + f2.s());
    const double ds = f2.s() - f1.s();
    double worst = 0;
    for (int i = 0; i <= ns; ++i)
      for (int j = 0; j <= ns; ++j) {
        const double yr = std::sqrt(s_mid) * i / ns;
        const double yz = R * j / ns;
        worst = std::max(worst, std::abs(f2(yr, yz) - f1(yr, yz)) / ds);
      }
    d.s_mid.push_back(s_mid);
    d.time_deriv.push_back(s_mid * worst);
  }
  std::vector<double> tail(d.time_deriv.begin() + d.time_deriv.size() / 2, d.time_deriv.end());
  d.tau_time_deriv = kendall_tau(tail);
  double g0 = 0, t0 = 0, p0 = 0;
  for (size_t k = 0; k < d.s.size(); ++k) g0 = std::max(g0, d.grad_sup[k]), t0 = std::max(t0, d.tangential[k]);
  for (double x : d.time_deriv) p0 = std::max(p0, x);
  // an upward trend only counts against boundedness when the time derivative
  // is no longer negligible next to the spatial gradient scale
  const bool trend_ok = d.tau_time_deriv <= 0.0 || p0 <= 0.05 * g0;
  d.bounded = std::isfinite(g0) && std::isfinite(t0) && std::isfinite(p0) && trend_ok;
  return d;
}

double energy_of(const quad::Fn2& phi, const quad::Fn2& dphi_r, const quad::Fn2& dphi_z,
                 const spectrum::Parameters& p, const quad::HalfSpaceRule& rule,
                 const quad::QuadratureRule& brule) {
  const double grad2 = rule.apply([&](double r, double z) {
    const double gr = dphi_r(r, z), gz = dphi_z(r, z);
    return gr * gr + gz * gz;
  });
  const double norm2 = rule.apply([&](double r, double z) {
    const double v = phi(r, z);
    return v * v;
  });
  const double bterm = brule.apply([&](double r) { return std::pow(std::max(0.0, phi(r, 0.0)), p.q + 1.0); });
  return 0.5 * grad2 + 0.5 * p.m * norm2 - bterm / (p.q + 1.0);
}

EnergySeries energy_diagnostic(const std::vector<simulator::RescaledField>& snaps,
                               const spectrum::Parameters& p, const quad::HalfSpaceRule& rule,
                               const quad::QuadratureRule& brule) {
  EnergySeries out;
  for (const auto& phi : snaps) {
    out.s.push_back(phi.s());
    out.E.push_back(energy_of([&](double r, double z) { return phi(r, z); },
                              [&](double r, double z) { return phi.deriv_r(r, z); },
                              [&](double r, double z) { return phi.deriv_z(r, z); }, p, rule, brule));
  }
  out.max_violation = 0.0;
  double scale = 0.0;
  for (double e : out.E) scale = std::max(scale, std::abs(e));
  for (size_t k = 0; k + 1 < out.E.size(); ++k)
    out.max_violation = std::max(out.max_violation, (out.E[k + 1] - out.E[k]) / scale);
  out.non_increasing = out.max_violation <= 1e-3;
  return out;
}

}  // namespace blowup::analyzer
