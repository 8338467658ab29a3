#include <cmath>
#include <random>

#include "blowup/specfun.hpp"
#include "doctest.h"

using namespace blowup;
using namespace blowup::specfun;

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;

// Brute-force oracle for the U integral: composite Simpson on a graded grid,
// independent of the double-exponential path used by the implementation.
double u_oracle(double a, double r) {
  auto f = [&](double t) { return std::exp(-r * t) * std::pow(t, a - 1.0) * std::pow(1.0 + t, -a - 0.5); };
  // integrate over (0, tmax) in log-spaced panels, Simpson with many nodes
  double sum = 0.0;
  double lo = 1e-12;
  const double tmax = (r > 0) ? std::max(1e4, 800.0 / r) : 1e12;
  while (lo < tmax) {
    double hi = std::min(lo * 4.0, tmax);
    const int N = 2000;
    const double h = (hi - lo) / N;
    double s = f(lo) + f(hi);
    for (int i = 1; i < N; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    sum += s * h / 3.0;
    lo = hi;
  }
  // small-t remainder: integrand ~ t^{a-1} near 0
  sum += std::pow(1e-12, a) / a;
  return sum / std::tgamma(a);
}
}  // namespace

TEST_CASE("gamma at half-integers") {
  CHECK(gamma_fn(0.5) == doctest::Approx(kSqrtPi).epsilon(1e-14));
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(1.5) == doctest::Approx(0.5 * kSqrtPi).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-1.0), std::domain_error);
}

TEST_CASE("gamma recurrence property") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(0.1, 20.0);
  for (int i = 0; i < 100; ++i) {
    const double x = dist(rng);
    CHECK(gamma_fn(x + 1.0) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-12));
  }
}

TEST_CASE("g_ratio values and monotonicity") {
  CHECK(g_ratio(1.0) == doctest::Approx(0.8862269254527580).epsilon(1e-12));
  CHECK(g_ratio(0.5) == doctest::Approx(1.0 / kSqrtPi).epsilon(1e-12));
  CHECK_THROWS_AS(g_ratio(0.0), std::domain_error);
  double prev = g_ratio(0.05);
  for (int i = 1; i < 1000; ++i) {
    const double lam = 0.05 + (20.0 - 0.05) * i / 999.0;
    const double cur = g_ratio(lam);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("tricomi_u at r = 0") {
  CHECK(tricomi_u(1.0, 0.0) == doctest::Approx(2.0).epsilon(1e-10));
  for (double a : {0.5, 1.5, 2.0})
    CHECK(tricomi_u(a, 0.0) == doctest::Approx(kSqrtPi / gamma_fn(a + 0.5)).epsilon(1e-10));
}

TEST_CASE("tricomi_u against brute-force quadrature oracle") {
  for (double a : {0.5, 1.0, 1.7, 3.0}) {
    for (double r : {0.01, 0.5, 2.0, 25.0}) {
      CHECK(tricomi_u(a, r) == doctest::Approx(u_oracle(a, r)).epsilon(1e-7));
    }
  }
}

TEST_CASE("tricomi_u large-r asymptotics: U ~ r^{-a}") {
  const double a = 1.0, r = 1e4;
  CHECK(tricomi_u(a, r) * std::pow(r, a) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("tricomi_u decreasing in r") {
  for (double a : {0.5, 1.0, 2.5}) {
    double prev = tricomi_u(a, 0.0);
    for (double r : {0.1, 0.3, 1.0, 3.0, 10.0, 100.0}) {
      const double cur = tricomi_u(a, r);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("tricomi_u_dxi boundary limit") {
  CHECK(tricomi_u_dxi(1.0, 0.0) == doctest::Approx(-kSqrtPi).epsilon(1e-12));
  // ratio of the two boundary limits, for a generic a = m
  const double m = 0.75;
  const double ratio = tricomi_u_dxi(m, 0.0) / tricomi_u(m, 0.0);
  CHECK(ratio == doctest::Approx(-m * gamma_fn(m + 0.5) / gamma_fn(m + 1.0)).epsilon(1e-10));
  // small-xi evaluation approaches the limit
  CHECK(tricomi_u_dxi(1.0, 1e-5) == doctest::Approx(-kSqrtPi).epsilon(1e-4));
}

TEST_CASE("tricomi_u_dxi matches central finite differences") {
  const double a = 1.0, xi = 1.0, h = 1e-5;
  const double fd = (tricomi_u(a, 0.25 * (xi + h) * (xi + h)) - tricomi_u(a, 0.25 * (xi - h) * (xi - h))) / (2 * h);
  CHECK(tricomi_u_dxi(a, xi) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("tricomi_u_dxi2 matches finite differences") {
  const double a = 1.3, xi = 1.5, h = 1e-4;
  auto U = [&](double x) { return tricomi_u(a, 0.25 * x * x); };
  const double fd2 = (U(xi + h) - 2.0 * U(xi) + U(xi - h)) / (h * h);
  CHECK(tricomi_u_dxi2(a, xi) == doctest::Approx(fd2).epsilon(1e-5));
}

TEST_CASE("hermite_phys base cases") {
  CHECK(hermite_phys(0, 3.7) == 1.0);
  CHECK(hermite_phys(1, 2.0) == 4.0);
  CHECK(hermite_phys(2, 1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(hermite_phys(31, 0.0), std::overflow_error);
  CHECK_THROWS_AS(hermite_phys(-1, 0.0), std::domain_error);
}

TEST_CASE("hermite_norm orthonormality and eigen-residual") {
  // Simpson quadrature oracle on (-40, 40)
  auto integ = [](auto&& f) {
    const int N = 40000;
    const double lo = -40.0, hi = 40.0, h = (hi - lo) / N;
    double s = f(lo) + f(hi);
    for (int i = 1; i < N; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
  };
  for (int k = 0; k <= 10; ++k) {
    const double nrm = integ([&](double xi) { return hermite_norm(k, xi) * hermite_norm(k, xi) * std::exp(-xi * xi / 4); });
    CHECK(nrm == doctest::Approx(1.0).epsilon(1e-10));
  }
  const double cross = integ([&](double xi) { return hermite_norm(1, xi) * hermite_norm(3, xi) * std::exp(-xi * xi / 4); });
  CHECK(std::abs(cross) < 1e-10);
  // -(H'' - (xi/2) H') = (k/2) H
  for (int k = 0; k <= 10; ++k) {
    for (double xi : {-3.0, -0.7, 0.0, 1.3, 4.2}) {
      const double res = -(hermite_norm_deriv2(k, xi) - 0.5 * xi * hermite_norm_deriv(k, xi)) - 0.5 * k * hermite_norm(k, xi);
      CHECK(std::abs(res) < 1e-8);
    }
  }
}
