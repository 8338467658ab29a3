#include "blowup/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blowup::simulator {

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

double interp_even(const std::vector<double>& xs, const double* ys, double x) {
  // linear interpolation on cell centers, even reflection below the first one
  if (xs.size() == 1) return ys[0];
  if (x <= xs.front()) return ys[0];
  if (x >= xs.back()) return ys[xs.size() - 1];
  const int i = int(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return (1 - w) * ys[i] + w * ys[i + 1];
}

}  // namespace

Mesh1D Mesh1D::geometric(double dx_min, double stretch, double length) {
  if (dx_min <= 0 || stretch < 1 || length <= 2 * dx_min)
    throw std::invalid_argument("bad mesh parameters");
  Mesh1D m;
  m.faces.push_back(0.0);
  double w = dx_min;
  while (m.faces.back() < length) {
    m.widths.push_back(w);
    m.faces.push_back(m.faces.back() + w);
    w *= stretch;
  }
  m.centers.resize(m.widths.size());
  for (size_t i = 0; i < m.widths.size(); ++i) m.centers[i] = 0.5 * (m.faces[i] + m.faces[i + 1]);
  return m;
}

void SimConfig::validate() const {
  if (params.q <= 1) throw std::invalid_argument("q must exceed 1");
  if (params.n < 1 || params.n > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  if (!u0) throw std::invalid_argument("initial data not set");
  if (u_stop <= u_gate) throw std::invalid_argument("u_stop must exceed u_gate");
  if (cfl <= 0 || cfl > 1) throw std::invalid_argument("cfl must lie in (0, 1]");
  Mesh1D mz = Mesh1D::geometric(dx_min, stretch, extent);
  std::vector<double> rs{0.0};
  if (params.n > 1) rs = mz.centers;
  const double tol = 1e-12;
  double peak = 0.0;
  for (double r : rs)
    for (double z : mz.centers) peak = std::max(peak, std::abs(u0(r, z)));
  for (double r : rs) {
    double prev = u0(r, mz.centers[0]);
    if (prev < -tol * peak) throw std::invalid_argument("initial data must be nonnegative");
    for (size_t j = 1; j < mz.centers.size(); ++j) {
      const double v = u0(r, mz.centers[j]);
      if (v < -tol * peak) throw std::invalid_argument("initial data must be nonnegative");
      if (v > prev + 1e-9 * peak)
        throw std::invalid_argument("initial data must not increase away from the boundary");
      prev = v;
    }
  }
  if (params.n > 1) {
    for (double z : mz.centers) {
      double prev = u0(rs[0], z);
      for (size_t i = 1; i < rs.size(); ++i) {
        const double v = u0(rs[i], z);
        if (v > prev + 1e-9 * peak)
          throw std::invalid_argument("initial data must be radially nonincreasing");
        prev = v;
      }
    }
  }
  if (u_stop <= 10 * peak) throw std::invalid_argument("u_stop must exceed 10 * sup u0");
}

Simulator::Simulator(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  mz_ = Mesh1D::geometric(cfg_.dx_min, cfg_.stretch, cfg_.extent);
  nz_ = mz_.size();
  if (cfg_.params.n > 1) {
    mr_ = mz_;
    nr_ = mr_.size();
  } else {
    mr_.centers = {0.0};
    mr_.faces = {0.0, 1.0};
    mr_.widths = {1.0};
    nr_ = 1;
  }
  u_.resize(size_t(nr_) * nz_);
  for (int i = 0; i < nr_; ++i)
    for (int j = 0; j < nz_; ++j) u_[size_t(i) * nz_ + j] = cfg_.u0(mr_.centers[i], mz_.centers[j]);
  scratch_ = u_;

  czp_.assign(nz_, 0.0);
  czm_.assign(nz_, 0.0);
  for (int j = 0; j + 1 < nz_; ++j) czp_[j] = 1.0 / (mz_.widths[j] * (mz_.centers[j + 1] - mz_.centers[j]));
  for (int j = 1; j < nz_; ++j) czm_[j] = 1.0 / (mz_.widths[j] * (mz_.centers[j] - mz_.centers[j - 1]));

  crp_.assign(nr_, 0.0);
  crm_.assign(nr_, 0.0);
  vr_.assign(nr_, 1.0);
  if (nr_ > 1) {
    for (int i = 0; i < nr_; ++i)
      vr_[i] = cfg_.params.n == 3 ? mr_.centers[i] * mr_.widths[i] : mr_.widths[i];
    for (int i = 0; i + 1 < nr_; ++i) {
      const double area = cfg_.params.n == 3 ? mr_.faces[i + 1] : 1.0;
      crp_[i] = area / (vr_[i] * (mr_.centers[i + 1] - mr_.centers[i]));
    }
    for (int i = 1; i < nr_; ++i) {
      const double area = cfg_.params.n == 3 ? mr_.faces[i] : 1.0;
      crm_[i] = area / (vr_[i] * (mr_.centers[i] - mr_.centers[i - 1]));
    }
  }

  diag_max_ = 0.0;
  for (int i = 0; i < nr_; ++i)
    for (int j = 0; j < nz_; ++j) diag_max_ = std::max(diag_max_, crp_[i] + crm_[i] + czp_[j] + czm_[j]);
}

double Simulator::wall_value(int ir) const {
  const double* row = u_.data() + size_t(ir) * nz_;
  return std::max(0.0, 1.5 * row[0] - 0.5 * row[1]);
}

double Simulator::umax() const {
  double m = 0.0;
  for (double v : u_) m = std::max(m, v);
  return m;
}

double Simulator::stable_dt() const { return cfg_.cfl / diag_max_; }

double Simulator::dt_for(double um) const {
  double dt = stable_dt();
  if (um > cfg_.u_gate) dt *= std::pow(cfg_.u_gate / um, 2.0 * (cfg_.params.q - 1.0));
  // explicit wall nonlinearity: stay below its linearized stability limit
  if (um > 0) {
    const double dt_bc = mz_.widths[0] / (1.5 * cfg_.params.q * std::pow(um, cfg_.params.q - 1.0));
    dt = std::min(dt, cfg_.cfl * dt_bc);
  }
  return dt;
}

double Simulator::current_dt() const { return dt_for(umax()); }

void Simulator::step(double dt) {
  const double q = cfg_.params.q;
  const int nz = nz_;
  const double inv_w0 = 1.0 / mz_.widths[0];
  const int ir_hi = nr_ > 1 ? nr_ - 1 : 1;  // frozen outer radial ring when present
  for (int i = 0; i < ir_hi; ++i) {
    const double* row = u_.data() + size_t(i) * nz;
    const double* up = i + 1 < nr_ ? u_.data() + size_t(i + 1) * nz : row;
    const double* dn = i > 0 ? u_.data() + size_t(i - 1) * nz : row;
    double* out = scratch_.data() + size_t(i) * nz;
    const double cp = crp_[i], cm = crm_[i];

    const double uw = std::max(0.0, 1.5 * row[0] - 0.5 * row[1]);
    out[0] = row[0] + dt * (czp_[0] * (row[1] - row[0]) + std::pow(uw, q) * inv_w0 +
                            cp * (up[0] - row[0]) + cm * (dn[0] - row[0]));
    for (int j = 1; j + 1 < nz; ++j) {
      out[j] = row[j] + dt * (czp_[j] * (row[j + 1] - row[j]) + czm_[j] * (row[j - 1] - row[j]) +
                              cp * (up[j] - row[j]) + cm * (dn[j] - row[j]));
    }
    out[nz - 1] = row[nz - 1];  // frozen far field
  }
  if (nr_ > 1) {
    double* out = scratch_.data() + size_t(nr_ - 1) * nz;
    const double* row = u_.data() + size_t(nr_ - 1) * nz;
    std::copy(row, row + nz, out);
  }
  u_.swap(scratch_);
  t_ += dt;
}

double Simulator::total_mass() const {
  double m = 0.0;
  for (int i = 0; i < nr_; ++i) {
    const double* row = u_.data() + size_t(i) * nz_;
    for (int j = 0; j < nz_; ++j) m += vr_[i] * mz_.widths[j] * row[j];
  }
  return m;
}

double Simulator::wall_flux() const {
  double f = 0.0;
  for (int i = 0; i < nr_; ++i) f += vr_[i] * std::pow(wall_value(i), cfg_.params.q);
  return f;
}

double Simulator::tangential_monotonicity() const {
  if (nr_ == 1) return 0.0;
  double worst = -1e300;
  for (int i = 0; i + 1 < nr_; ++i) {
    const double dr = mr_.centers[i + 1] - mr_.centers[i];
    for (int j = 0; j < nz_; ++j) {
      const double slope = (u_[size_t(i + 1) * nz_ + j] - u_[size_t(i) * nz_ + j]) / dr;
      worst = std::max(worst, slope);
    }
  }
  return worst;
}

RunResult Simulator::run_to_blowup() {
  RunResult out;
  const double m = cfg_.params.m;
  double um = umax();
  const double level_factor = std::exp(m * cfg_.snapshot_ds);
  double next_level = um * level_factor;

  auto record_wall = [&](double u_now) {
    out.trace.t.push_back(t_);
    std::vector<double> row(nr_);
    for (int i = 0; i < nr_; ++i) row[i] = wall_value(i);
    // the sup lives on the wall; the extrapolated wall value beats cell centers
    for (double v : row) u_now = std::max(u_now, v);
    out.trace.umax.push_back(u_now);
    out.trace.wall.push_back(std::move(row));
  };
  auto record_snapshot = [&](double u_now) { out.snapshots.push_back({t_, u_now, u_}); };

  record_snapshot(um);
  record_wall(um);

  long k = 0;
  while (true) {
    step(dt_for(um));
    ++k;
    um = umax();
    const long cadence = um >= cfg_.u_gate ? 8 : 200;
    if (k % cadence == 0) record_wall(um);
    if (um >= next_level) {
      record_snapshot(um);
      while (next_level <= um) next_level *= level_factor;
    }
    if (um >= cfg_.u_stop) {
      out.estimate.blew_up = true;
      break;
    }
    if (t_ >= cfg_.t_max || !std::isfinite(um)) break;
  }
  record_wall(um);
  record_snapshot(um);

  if (!out.estimate.blew_up) {
    out.estimate.verdict = "global or slow";
    return out;
  }

  // T from the linear law of ||u||^(-1/m) over the last decade of growth
  std::vector<double> xs, ys;
  const double floor_u = um / 10.0;
  for (size_t i = 0; i < out.trace.t.size(); ++i) {
    if (out.trace.umax[i] >= floor_u && out.trace.umax[i] > 0) {
      xs.push_back(out.trace.t[i]);
      ys.push_back(std::pow(out.trace.umax[i], -1.0 / m));
    }
  }
  if (xs.size() < 50) {
    out.estimate.verdict = "blowup (insufficient samples for T)";
    out.estimate.T = t_;
    return out;
  }
  const LineFit f = fit_line(xs, ys);
  out.estimate.T = -f.a / f.b;
  out.estimate.r2 = f.r2;
  out.estimate.window_lo = floor_u;
  out.estimate.window_hi = um;
  out.estimate.verdict = "blowup";
  return out;
}

// ---------------------------------------------------------------------------

RescaledField::RescaledField(const Snapshot& snap, const Mesh1D& mr, const Mesh1D& mz,
                             const spectrum::Parameters& p, double T)
    : t_(snap.t), m_(p.m) {
  const double tau = T - snap.t;
  if (tau <= 0) throw std::invalid_argument("snapshot is at or past the blow-up time");
  s_ = -std::log(tau);
  scale_ = std::sqrt(tau);
  len_ = mz.centers.back();
  y_max_ = len_ / scale_;
  std::vector<double> raxis = mr.centers.size() > 1 ? mr.centers : std::vector<double>{};
  g_ = quad::GridFunction(raxis, mz.centers, snap.u);
  const double amp = std::pow(tau, m_);
  std::vector<double> scaled = g_.values();
  for (double& v : scaled) v *= amp;
  g_ = quad::GridFunction(raxis, mz.centers, std::move(scaled));
}

double RescaledField::operator()(double yr, double yz) const {
  // the first cell center sits half a cell off the wall; the spline
  // extrapolates that half cell so boundary values are not biased
  const double xz = std::min(scale_ * std::abs(yz), len_);
  if (g_.is1d()) return g_.eval1d(xz);
  const double xr = std::min(scale_ * std::abs(yr), len_);
  return g_(xr, xz);
}

double RescaledField::deriv_r(double yr, double yz) const {
  if (g_.is1d()) return 0.0;
  const double xr = scale_ * std::abs(yr);
  if (xr > len_) return 0.0;
  const double xz = std::min(scale_ * std::abs(yz), len_);
  const double sgn = yr < 0 ? -1.0 : 1.0;
  return sgn * scale_ * g_.deriv_r(xr, xz);
}

double RescaledField::deriv_z(double yr, double yz) const {
  const double xz = scale_ * std::abs(yz);
  if (xz > len_) return 0.0;
  const double sgn = yz < 0 ? -1.0 : 1.0;
  const double xr = g_.is1d() ? 0.0 : std::min(scale_ * std::abs(yr), len_);
  return sgn * scale_ * g_.deriv_z(xr, xz);
}

RescaledField rescale_phi(const Snapshot& snap, const Mesh1D& mr, const Mesh1D& mz,
                          const spectrum::Parameters& p, double T) {
  return RescaledField(snap, mr, mz, p, T);
}

std::vector<std::pair<double, double>> rescale_vs(const BoundaryTrace& trace, const Mesh1D& mr,
                                                  const spectrum::Parameters& p, double T,
                                                  double theta, double s, double t1, int n_samples) {
  if (trace.t.empty()) throw std::invalid_argument("empty boundary trace");
  const double lam2 = std::exp(-s);
  const double rstar = theta * std::sqrt(s) * std::sqrt(lam2);
  const double amp = std::pow(lam2, p.m);
  // only rescaled times backed by recorded physical times are sampled
  const double t_hi = std::min(1.0, 1.0 + (trace.t.back() - T) / lam2);
  const double t_lo = std::max(t1, 1.0 + (trace.t.front() - T) / lam2);
  if (t_hi <= t_lo) throw std::invalid_argument("trace does not cover the requested window");
  std::vector<std::pair<double, double>> out;
  out.reserve(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    const double tt = t_lo + (t_hi - t_lo) * (k + 0.5) / n_samples;
    const double t_phys = T + (tt - 1.0) * lam2;
    const auto it = std::upper_bound(trace.t.begin(), trace.t.end(), t_phys);
    const int j = std::clamp(int(it - trace.t.begin()) - 1, 0, int(trace.t.size()) - 2);
    const double w = std::clamp((t_phys - trace.t[j]) / (trace.t[j + 1] - trace.t[j]), 0.0, 1.0);
    const double va = interp_even(mr.centers, trace.wall[j].data(), rstar);
    const double vb = interp_even(mr.centers, trace.wall[j + 1].data(), rstar);
    out.emplace_back(tt, amp * ((1 - w) * va + w * vb));
  }
  return out;
}

}  // namespace blowup::simulator
