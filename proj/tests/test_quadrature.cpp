#include <cmath>
#include <random>

#include "blowup/quadrature.hpp"
#include "blowup/specfun.hpp"
#include "doctest.h"

using namespace blowup;
using namespace blowup::quad;

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;

// Closed-form Gaussian moments: int xi^{2k} e^{-xi^2/4} dxi = 2 sqrt(pi) (2k-1)!! 2^k
double moment(int k) {
  double dd = 1.0;
  for (int j = 2 * k - 1; j > 1; j -= 2) dd *= j;
  return 2.0 * kSqrtPi * dd * std::pow(2.0, k);
}
}  // namespace

TEST_CASE("half-line rule reproduces Gaussian mass") {
  auto rule = half_line_rule();
  CHECK(inner_rho([](double) { return 1.0; }, [](double) { return 1.0; }, rule) ==
        doctest::Approx(kSqrtPi).epsilon(1e-12));
}

TEST_CASE("full-line Hermite orthogonality") {
  auto rule = full_line_rule();
  const double v = inner_rho([](double x) { return specfun::hermite_norm(1, x); },
                             [](double x) { return specfun::hermite_norm(2, x); }, rule);
  CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("node-doubling convergence on polynomial integrands") {
  for (int deg : {4, 8, 12}) {
    auto f = [deg](double x) { return std::pow(x, deg); };
    const double a = inner_rho(f, [](double) { return 1.0; }, half_line_rule(150));
    const double b = inner_rho(f, [](double) { return 1.0; }, half_line_rule(300));
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
    // against closed-form half moments (even integrand: half of full line);
    // wider truncation so the Gaussian tail is below the tolerance
    const double wide = inner_rho(f, [](double) { return 1.0; }, half_line_rule(400, 25.0));
    CHECK(wide == doctest::Approx(0.5 * moment(deg / 2)).epsilon(1e-12));
  }
}

TEST_CASE("boundary rule: Gaussian mass in n = 2") {
  auto rule = boundary_rule(2);
  CHECK(boundary_inner_rho([](double) { return 1.0; }, [](double) { return 1.0; }, rule) ==
        doctest::Approx(2.0 * kSqrtPi).epsilon(1e-12));
}

TEST_CASE("boundary rule: cubic moment polynomial vs closed form, n = 2") {
  auto rule = boundary_rule(2);
  auto f = [](double r) {
    const double t = r * r - 2.0;
    return t * t * t;
  };
  // (xi^2-2)^3 = xi^6 - 6 xi^4 + 12 xi^2 - 8
  const double exact = moment(3) - 6 * moment(2) + 12 * moment(1) - 8 * moment(0);
  CHECK(boundary_inner_rho(f, [](double) { return 1.0; }, rule) == doctest::Approx(exact).epsilon(1e-10));
  CHECK(exact == doctest::Approx(128.0 * kSqrtPi).epsilon(1e-14));
}

TEST_CASE("boundary rule: zero function") {
  auto rule = boundary_rule(2);
  CHECK(boundary_inner_rho([](double) { return 0.0; }, [](double) { return 1.0; }, rule) == 0.0);
}

TEST_CASE("half-space rule n = 2 and n = 3 mass") {
  CHECK(half_space_rule(2).apply([](double, double) { return 1.0; }) ==
        doctest::Approx(2.0 * kSqrtPi * kSqrtPi).epsilon(1e-12));
  // n=3: (2 sqrt(pi))^2 tangential x sqrt(pi) half-line
  CHECK(half_space_rule(3).apply([](double, double) { return 1.0; }) ==
        doctest::Approx(4.0 * kSqrtPi * kSqrtPi * kSqrtPi).epsilon(1e-12));
}

TEST_CASE("cubic spline interpolates smooth functions") {
  std::vector<double> x, y;
  for (int i = 0; i <= 100; ++i) {
    x.push_back(i * 0.1);
    y.push_back(std::sin(x.back()));
  }
  CubicSpline s(x, y);
  CHECK(s(4.321) == doctest::Approx(std::sin(4.321)).epsilon(1e-5));
  CHECK(s.deriv(4.321) == doctest::Approx(std::cos(4.321)).epsilon(1e-4));
}

namespace {
GridFunction sample_grid(const std::function<double(double, double)>& f, double rmax = 12.5, double zmax = 12.5,
                         int nr = 140, int nz = 140) {
  std::vector<double> r(nr), z(nz), v(size_t(nr) * nz);
  for (int i = 0; i < nr; ++i) r[i] = rmax * i / (nr - 1);
  for (int j = 0; j < nz; ++j) z[j] = zmax * j / (nz - 1);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nz; ++j) v[size_t(i) * nz + j] = f(r[i], z[j]);
  return GridFunction(r, z, v);
}
}  // namespace

TEST_CASE("poincare_check analytic cases") {
  auto rule = half_space_rule(2, 120);
  SUBCASE("constant function, normal axis") {
    auto u = sample_grid([](double, double) { return 1.0; });
    auto res = poincare_check(u, 1, rule);
    // lhs = mass_r * int z^2 rho = 2 sqrt(pi) * (1/2) moment(1); rhs = 4 * mass
    CHECK(res.lhs == doctest::Approx(4.0 * kSqrtPi * kSqrtPi).epsilon(1e-3));
    CHECK(res.holds);
  }
  SUBCASE("linear coordinate function") {
    auto u = sample_grid([](double r, double) { return r; });
    CHECK(poincare_check(u, 0, rule).holds);
    auto u2 = sample_grid([](double, double z) { return z; });
    CHECK(poincare_check(u2, 1, rule).holds);
  }
}

TEST_CASE("poincare_check on random band-limited functions") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  auto rule = half_space_rule(2, 120);
  for (int trial = 0; trial < 50; ++trial) {
    double c[4][4];
    for (auto& row : c)
      for (auto& v : row) v = coef(rng);
    auto u = sample_grid([&](double r, double z) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s += c[a][b] * specfun::hermite_norm(a, r) * specfun::hermite_norm(b, z);
      return s;
    });
    CHECK(poincare_check(u, 0, rule).holds);
    CHECK(poincare_check(u, 1, rule).holds);
  }
}

TEST_CASE("GridFunction rejects non-finite samples") {
  std::vector<double> ax{0.0, 1.0};
  CHECK_THROWS(GridFunction({}, ax, {1.0, std::nan("")}));
}
