#include "blowup/profile.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "blowup/specfun.hpp"

namespace blowup::profile {

using specfun::gamma_fn;
using specfun::tricomi_u;
using specfun::tricomi_u_dxi;
using specfun::tricomi_u_dxi2;

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

StationaryProfile::StationaryProfile(const spectrum::Parameters& p) : p_(p) {
  const double e = 1.0 / (p.q - 1.0);
  C_ = std::pow(p.m, e) / kSqrtPi * std::pow(std::pow(gamma_fn(p.m + 0.5), p.q) / gamma_fn(p.m + 1.0), e);
}

double StationaryProfile::operator()(double xi) const { return C_ * tricomi_u(p_.m, 0.25 * xi * xi); }
double StationaryProfile::deriv(double xi) const { return C_ * tricomi_u_dxi(p_.m, xi); }
double StationaryProfile::deriv2(double xi) const { return C_ * tricomi_u_dxi2(p_.m, xi); }

FarFieldFit cB_fit(const StationaryProfile& f, double lo, double hi) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("cB_fit: need 0 < lo < hi");
  const int n = 60;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    const double xi = lo * std::pow(hi / lo, double(i) / (n - 1));
    const double v = f(xi);
    if (!(v > 0.0)) throw std::runtime_error("cB_fit: profile not positive in the fit window");
    lx[i] = std::log(xi);
    ly[i] = std::log(v);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double icept = (sy * sxx - sx * sxy) / det;
  double ss_res = 0.0, ss_tot = 0.0;
  const double ybar = sy / n;
  for (int i = 0; i < n; ++i) {
    const double e = ly[i] - (icept + slope * lx[i]);
    ss_res += e * e;
    ss_tot += (ly[i] - ybar) * (ly[i] - ybar);
  }
  FarFieldFit out;
  out.prefactor = std::exp(icept);
  out.exponent = slope;
  out.r2 = 1.0 - ss_res / ss_tot;
  out.window_lo = lo;
  out.window_hi = hi;
  if (out.r2 < 0.999) throw std::runtime_error("cB_fit: power law fit too poor (R^2 < 0.999)");
  return out;
}

ShotOutcome shoot(const spectrum::Parameters& p, double beta, double xi_max) {
  if (beta <= 0.0) throw std::invalid_argument("shoot: beta must be > 0");
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const double m = p.m;
  auto rhs = [m](const State& y, State& dy, double xi) {
    dy[0] = y[1];
    dy[1] = 0.5 * xi * y[1] + m * y[0];
  };
  State y{beta, -std::pow(beta, p.q)};
  auto stepper = ode::make_controlled<ode::runge_kutta_cash_karp54<State>>(1e-13, 1e-10);
  double xi = 0.0, dxi = 1e-3;
  while (xi < xi_max) {
    if (y[0] <= 0.0) return ShotOutcome::CrossedZero;
    if (std::abs(y[0]) > 1e3) return ShotOutcome::Diverged;
    ode::controlled_step_result r = stepper.try_step(rhs, y, xi, dxi);
    if (r == ode::fail) {
      if (dxi < 1e-14) throw std::runtime_error("shoot: step size underflow");
      continue;
    }
    dxi = std::min(dxi, xi_max - xi + 1e-12);
  }
  if (y[0] <= 0.0) return ShotOutcome::CrossedZero;
  if (std::abs(y[0]) > 1e3) return ShotOutcome::Diverged;
  return ShotOutcome::Bounded;
}

UniquenessReport check_uniqueness_ode(const spectrum::Parameters& p, double beta_lo, double beta_hi) {
  if (!(0.0 < beta_lo && beta_lo < beta_hi)) throw std::invalid_argument("check_uniqueness_ode: need 0 < beta_lo < beta_hi");
  UniquenessReport rep;
  rep.below = shoot(p, beta_lo);
  rep.above = shoot(p, beta_hi);
  if (rep.below == rep.above) throw std::invalid_argument("check_uniqueness_ode: trial values do not straddle B");
  double lo = beta_lo, hi = beta_hi;
  for (int it = 0; it < 60 && hi - lo > 1e-9; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shoot(p, mid) == rep.below ? lo : hi) = mid;
  }
  rep.beta_star = 0.5 * (lo + hi);
  rep.gap = std::abs(rep.beta_star - p.B);
  return rep;
}

}  // namespace blowup::profile
