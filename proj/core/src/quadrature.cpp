#include "blowup/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blowup::quad {

namespace {
constexpr double kPi = 3.14159265358979323846;

double rho1(double xi) { return std::exp(-0.25 * xi * xi); }
}  // namespace

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  const int m = (n + 1) / 2;
  const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = xm - xl * z;
    x[n - 1 - i] = xm + xl * z;
    w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

double QuadratureRule::apply(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const double v = f(nodes[i]);
    if (!std::isfinite(v)) throw std::runtime_error("QuadratureRule: non-finite sample");
    s += weights[i] * v;
  }
  return s;
}

double HalfSpaceRule::apply(const std::function<double(double, double)>& f) const {
  double s = 0.0;
  for (size_t i = 0; i < radial.nodes.size(); ++i) {
    double row = 0.0;
    for (size_t j = 0; j < normal.nodes.size(); ++j) {
      const double v = f(radial.nodes[i], normal.nodes[j]);
      if (!std::isfinite(v)) throw std::runtime_error("HalfSpaceRule: non-finite sample");
      row += normal.weights[j] * v;
    }
    s += radial.weights[i] * row;
  }
  return s;
}

QuadratureRule half_line_rule(int n_nodes, double y_max) {
  QuadratureRule r;
  r.tag = Domain::HalfLine;
  gauss_legendre(n_nodes, 0.0, y_max, r.nodes, r.weights);
  for (size_t i = 0; i < r.nodes.size(); ++i) r.weights[i] *= rho1(r.nodes[i]);
  return r;
}

QuadratureRule full_line_rule(int n_nodes, double y_max) {
  QuadratureRule r;
  r.tag = Domain::FullLine;
  gauss_legendre(n_nodes, -y_max, y_max, r.nodes, r.weights);
  for (size_t i = 0; i < r.nodes.size(); ++i) r.weights[i] *= rho1(r.nodes[i]);
  return r;
}

QuadratureRule boundary_rule(int n_space, int n_nodes, double r_max) {
  if (n_space < 2) throw std::invalid_argument("boundary_rule: n_space must be >= 2");
  QuadratureRule r;
  r.tag = Domain::Boundary;
  gauss_legendre(n_nodes, 0.0, r_max, r.nodes, r.weights);
  // omega_{n-2}: surface measure of the (n-2)-sphere; omega_0 = 2 folds the
  // tangential line onto r >= 0, omega_1 = 2 pi.
  const double omega = (n_space == 2) ? 2.0 : 2.0 * kPi;
  if (n_space > 3) throw std::invalid_argument("boundary_rule: n_space > 3 not supported");
  for (size_t i = 0; i < r.nodes.size(); ++i)
    r.weights[i] *= omega * std::pow(r.nodes[i], n_space - 2) * rho1(r.nodes[i]);
  return r;
}

HalfSpaceRule half_space_rule(int n_space, int n_nodes, double y_max) {
  HalfSpaceRule hs;
  hs.n_space = n_space;
  hs.radial = boundary_rule(n_space, n_nodes, y_max);
  hs.normal = half_line_rule(n_nodes, y_max);
  return hs;
}

// ---------------------------------------------------------------------------
// cubic spline

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const int n = int(x_.size());
  if (n < 2 || y_.size() != x_.size()) throw std::invalid_argument("CubicSpline: need >= 2 matching points");
  m_.assign(n, 0.0);
  if (n == 2) return;
  std::vector<double> a(n, 0), b(n, 0), c(n, 0), d(n, 0);
  for (int i = 1; i < n - 1; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    a[i] = h0 / 6.0;
    b[i] = (h0 + h1) / 3.0;
    c[i] = h1 / 6.0;
    d[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  // natural BCs: m_0 = m_{n-1} = 0; Thomas solve on 1..n-2
  for (int i = 2; i < n - 1; ++i) {
    const double f = a[i] / b[i - 1];
    b[i] -= f * c[i - 1];
    d[i] -= f * d[i - 1];
  }
  m_[n - 2] = d[n - 2] / b[n - 2];
  for (int i = n - 3; i >= 1; --i) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
}

int CubicSpline::find(double x) const {
  int lo = int(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
  return std::clamp(lo, 0, int(x_.size()) - 2);
}

double CubicSpline::operator()(double x) const {
  const int i = find(x);
  const double h = x_[i + 1] - x_[i];
  const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
  return A * y_[i] + B * y_[i + 1] + ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double x) const {
  const int i = find(x);
  const double h = x_[i + 1] - x_[i];
  const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h + ((3 * B * B - 1) * m_[i + 1] - (3 * A * A - 1) * m_[i]) * h / 6.0;
}

// ---------------------------------------------------------------------------
// grid function

GridFunction::GridFunction(std::vector<double> raxis, std::vector<double> zaxis, std::vector<double> values)
    : raxis_(std::move(raxis)), zaxis_(std::move(zaxis)), values_(std::move(values)) {
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite sample");
  if (raxis_.empty()) {
    if (values_.size() != zaxis_.size()) throw std::invalid_argument("GridFunction: size mismatch");
    line_ = CubicSpline(zaxis_, values_);
    return;
  }
  if (values_.size() != raxis_.size() * zaxis_.size()) throw std::invalid_argument("GridFunction: size mismatch");
  rows_.reserve(raxis_.size());
  for (size_t i = 0; i < raxis_.size(); ++i) {
    std::vector<double> row(values_.begin() + i * zaxis_.size(), values_.begin() + (i + 1) * zaxis_.size());
    rows_.emplace_back(zaxis_, std::move(row));
  }
}

double GridFunction::eval1d(double z) const { return line_(z); }

namespace {
// spline across the r-direction through a column of row-spline values;
// a local 6-point window keeps evaluation O(1) per call
double across(const std::vector<double>& raxis, const std::vector<CubicSpline>& rows, double r, double z, bool deriv_r) {
  const int n = int(raxis.size());
  int lo = int(std::upper_bound(raxis.begin(), raxis.end(), r) - raxis.begin()) - 1;
  lo = std::clamp(lo - 2, 0, std::max(0, n - 6));
  const int m = std::min(6, n - lo);
  std::vector<double> xs(m), ys(m);
  for (int k = 0; k < m; ++k) {
    xs[k] = raxis[lo + k];
    ys[k] = rows[lo + k](z);
  }
  CubicSpline s(xs, ys);
  return deriv_r ? s.deriv(r) : s(r);
}
}  // namespace

double GridFunction::operator()(double r, double z) const {
  if (is1d()) return line_(z);
  return across(raxis_, rows_, r, z, false);
}

double GridFunction::deriv_r(double r, double z) const {
  if (is1d()) return 0.0;
  return across(raxis_, rows_, r, z, true);
}

double GridFunction::deriv_z(double r, double z) const {
  if (is1d()) return line_.deriv(z);
  const int n = int(raxis_.size());
  int lo = int(std::upper_bound(raxis_.begin(), raxis_.end(), r) - raxis_.begin()) - 1;
  lo = std::clamp(lo - 2, 0, std::max(0, n - 6));
  const int m = std::min(6, n - lo);
  std::vector<double> xs(m), ys(m);
  for (int k = 0; k < m; ++k) {
    xs[k] = raxis_[lo + k];
    ys[k] = rows_[lo + k].deriv(z);
  }
  CubicSpline s(xs, ys);
  return s(r);
}

// ---------------------------------------------------------------------------
// inner products

double inner_rho(const Fn1& f, const Fn1& g, const QuadratureRule& rule) {
  return rule.apply([&](double x) { return f(x) * g(x); });
}

double inner_rho(const Fn2& f, const Fn2& g, const HalfSpaceRule& rule) {
  return rule.apply([&](double r, double z) { return f(r, z) * g(r, z); });
}

double norm_rho(const Fn2& f, const HalfSpaceRule& rule) {
  return std::sqrt(std::max(0.0, inner_rho(f, f, rule)));
}

double boundary_inner_rho(const Fn1& f, const Fn1& g, const QuadratureRule& boundary) {
  if (boundary.tag != Domain::Boundary && boundary.tag != Domain::FullLine)
    throw std::invalid_argument("boundary_inner_rho: rule must live on the boundary");
  return boundary.apply([&](double x) { return f(x) * g(x); });
}

PoincareResult poincare_check(const GridFunction& u, int axis, const HalfSpaceRule& rule, double tol) {
  if (rule.n_space != 2) throw std::invalid_argument("poincare_check: implemented for n = 2 (Cartesian axes)");
  auto uval = [&](double r, double z) { return u(r, z); };
  auto du = [&](double r, double z) { return axis == 0 ? u.deriv_r(r, z) : u.deriv_z(r, z); };
  auto coord = [&](double r, double z) { return axis == 0 ? r : z; };
  PoincareResult res;
  res.lhs = rule.apply([&](double r, double z) {
    const double c = coord(r, z), v = uval(r, z);
    return c * c * v * v;
  });
  const double grad2 = rule.apply([&](double r, double z) {
    const double d = du(r, z);
    return d * d;
  });
  const double n2 = rule.apply([&](double r, double z) {
    const double v = uval(r, z);
    return v * v;
  });
  res.rhs = 16.0 * grad2 + 4.0 * n2;
  res.holds = res.lhs <= res.rhs + tol + 0.01 * res.rhs;
  return res;
}

}  // namespace blowup::quad
