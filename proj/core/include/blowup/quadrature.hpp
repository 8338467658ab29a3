#pragma once

#include <functional>
#include <vector>

#include "blowup/accuracy.hpp"

namespace blowup::quad {

enum class Domain { FullLine, HalfLine, HalfSpace, Boundary };

// One-dimensional rule; weights already carry the Gaussian factor
// rho = e^{-xi^2/4} (and, for radial boundary rules, omega_{n-2} r^{n-2}).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  Domain tag = Domain::HalfLine;

  double apply(const std::function<double(double)>& f) const;
};

// Tensor rule on the half-space R_+^n restricted to axisymmetric integrands
// f(r, z): weight omega_{n-2} r^{n-2} e^{-(r^2+z^2)/4} dr dz (for n = 2 the
// tangential factor is a full line folded to r >= 0 with omega_0 = 2).
struct HalfSpaceRule {
  QuadratureRule radial;  // tangential radius, weight folded
  QuadratureRule normal;  // y_n half-line
  int n_space = 2;

  double apply(const std::function<double(double, double)>& f) const;
};

// Gauss-Legendre rules against the Gaussian weight on truncated intervals;
// y_max = 12 leaves a tail below 1.2e-16.
QuadratureRule half_line_rule(int n_nodes = 200, double y_max = 12.0);
QuadratureRule full_line_rule(int n_nodes = 400, double y_max = 12.0);
QuadratureRule boundary_rule(int n_space, int n_nodes = 200, double r_max = 12.0);
HalfSpaceRule half_space_rule(int n_space, int n_nodes = 160, double y_max = 12.0);

// Raw Gauss-Legendre nodes/weights on (a, b), no weight function.
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

// Natural cubic spline on a strictly increasing (possibly nonuniform) grid.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double deriv(double x) const;

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at knots
  int find(double x) const;
};

// Sampled axisymmetric field on a tensor grid (r x z), interpolated with
// tensor-product cubic splines. Also usable as a 1-D field with empty raxis.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(std::vector<double> raxis, std::vector<double> zaxis, std::vector<double> values);

  double operator()(double r, double z) const;
  double eval1d(double z) const;
  double deriv_r(double r, double z) const;
  double deriv_z(double r, double z) const;

  const std::vector<double>& raxis() const { return raxis_; }
  const std::vector<double>& zaxis() const { return zaxis_; }
  const std::vector<double>& values() const { return values_; }
  double at(int i, int j) const { return values_[i * zaxis_.size() + j]; }
  bool is1d() const { return raxis_.empty(); }

 private:
  std::vector<double> raxis_, zaxis_, values_;  // values row-major (r, z)
  std::vector<CubicSpline> rows_;               // spline in z per r-node
  CubicSpline line_;                            // 1-D case
};

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

// Weighted inner products; the rule's weights carry rho.
double inner_rho(const Fn1& f, const Fn1& g, const QuadratureRule& rule);
double inner_rho(const Fn2& f, const Fn2& g, const HalfSpaceRule& rule);
double norm_rho(const Fn2& f, const HalfSpaceRule& rule);
double boundary_inner_rho(const Fn1& f, const Fn1& g, const QuadratureRule& boundary);

struct PoincareResult {
  double lhs = 0, rhs = 0;
  bool holds = false;
};

// Checks int |y_i|^2 u^2 rho <= 16 ||d_i u||_rho^2 + 4 ||u||_rho^2 on the
// half-space, with axis = 0 the tangential radius and axis = 1 the normal.
PoincareResult poincare_check(const GridFunction& u, int axis, const HalfSpaceRule& rule, double tol = 1e-8);

}  // namespace blowup::quad
