#include <cmath>
#include <random>
#include <vector>

#include "blowup/quadrature.hpp"
#include "blowup/specfun.hpp"
#include "blowup/spectrum.hpp"
#include "doctest.h"

using namespace blowup;
using namespace blowup::spectrum;

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;

double inner_half_line(const std::function<double(double)>& f, const std::function<double(double)>& g) {
  return specfun::integrate_half_line([&](double xi) { return f(xi) * g(xi) * std::exp(-0.25 * xi * xi); });
}
}  // namespace

TEST_CASE("parameters satisfy the coupling identities") {
  for (double q : {1.3, 1.5, 2.0, 2.5, 3.0}) {
    auto p = Parameters::make(q, 2);
    CHECK(p.m == doctest::Approx(0.5 / (q - 1.0)).epsilon(1e-14));
    const double K0 = q * p.m * specfun::gamma_fn(p.m + 0.5) / specfun::gamma_fn(p.m + 1.0);
    CHECK(p.K0 == doctest::Approx(K0).epsilon(1e-10));
    CHECK(p.K0 == doctest::Approx(q * std::pow(p.B, q - 1.0)).epsilon(1e-10));
  }
  CHECK_THROWS(Parameters::make(1.0, 2));
  CHECK_THROWS(Parameters::make(0.5, 2));
  CHECK_THROWS(Parameters::make(3.0, 3));  // q < n/(n-2) violated
  CHECK_NOTHROW(Parameters::make(2.9, 3));
}

TEST_CASE("q=2 closed form B = 1/sqrt(pi)") {
  auto p = Parameters::make(2.0, 2);
  CHECK(p.B == doctest::Approx(1.0 / kSqrtPi).epsilon(1e-12));
  CHECK(p.K0 == doctest::Approx(2.0 / kSqrtPi).epsilon(1e-12));
}

TEST_CASE("kappa1 equals -(m+1)") {
  CHECK(kappa1(Parameters::make(2.0, 2)) == doctest::Approx(-1.5).epsilon(1e-10));
  CHECK(kappa1(Parameters::make(3.0, 2)) == doctest::Approx(-1.25).epsilon(1e-10));
  CHECK(kappa1(Parameters::make(1.5, 1)) == doctest::Approx(-2.0).epsilon(1e-10));
  std::mt19937 rng(411);
  std::uniform_real_distribution<double> dq(1.1, 4.0);
  for (int i = 0; i < 20; ++i) {
    auto p = Parameters::make(dq(rng), 2);
    CHECK(std::abs(kappa1(p) + (p.m + 1.0)) < 1e-10);
  }
}

TEST_CASE("decay modes: boundary data, slope, and monotonicity in K") {
  auto p = Parameters::make(2.0, 2);
  auto b0 = solve_mu(p.K0);
  CHECK(b0.mu() == doctest::Approx(-(p.m + 1.0)).epsilon(1e-10));
  CHECK(b0(0.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(b0.deriv(0.0) == doctest::Approx(-p.K0).epsilon(1e-9));

  double prev_mu = 1.0;
  for (double K : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    auto b = solve_mu(K);
    CHECK(b.mu() < 0.0);
    CHECK(b.mu() < prev_mu);  // mu_K strictly decreasing in K
    prev_mu = b.mu();
    CHECK(b(0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(b.deriv(0.0) == doctest::Approx(-K).epsilon(1e-8));
    // b_K is positive and decreasing on the half line
    double last = b(0.0);
    for (double xi = 0.5; xi <= 8.0; xi += 0.5) {
      const double v = b(xi);
      CHECK(v > 0.0);
      CHECK(v < last);
      last = v;
    }
  }
  CHECK_THROWS(solve_mu(0.0));
  CHECK_THROWS(solve_mu(-1.0));
}

TEST_CASE("decay modes solve the half-line drift ODE") {
  // b'' - (xi/2) b' + mu b = 0
  auto check_ode = [](double K) {
    auto b = solve_mu(K);
    for (double xi : {0.3, 1.0, 2.0, 4.0, 6.0}) {
      const double h = 1e-4;
      const double bpp = (b(xi + h) - 2.0 * b(xi) + b(xi - h)) / (h * h);
      const double bp = (b(xi + h) - b(xi - h)) / (2.0 * h);
      CHECK(std::abs(bpp - 0.5 * xi * bp + b.mu() * b(xi)) < 1e-5);
    }
  };
  check_ode(0.3);
  check_ode(1.0);
  check_ode(3.0);
}

TEST_CASE("Galerkin Robin spectrum: ground state matches the closed form") {
  for (double q : {1.5, 2.0, 3.0}) {
    auto p = Parameters::make(q, 2);
    auto pairs = solve_kappa(p, 6, 64);
    REQUIRE(pairs.size() == 6);
    CHECK(pairs[0].kappa == doctest::Approx(-(p.m + 1.0)).epsilon(1e-8));
    // eigenvalues strictly increasing, only one negative mode
    for (size_t k = 1; k < pairs.size(); ++k) CHECK(pairs[k].kappa > pairs[k - 1].kappa + 1e-6);
    CHECK(pairs[1].kappa > 0.0);
  }
}

TEST_CASE("Galerkin spectrum is converged in the basis size") {
  auto p = Parameters::make(2.0, 2);
  auto a = solve_kappa(p, 6, 48);
  auto b = solve_kappa(p, 6, 64);
  for (int k = 0; k < 6; ++k) CHECK(std::abs(a[k].kappa - b[k].kappa) < 1e-7);
}

TEST_CASE("Robin eigenfunctions: orthonormality and boundary condition") {
  auto p = Parameters::make(2.0, 2);
  auto pairs = solve_kappa(p, 4, 64);
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const double ip = inner_half_line([&](double x) { return pairs[i](x); }, [&](double x) { return pairs[j](x); });
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-7);
    }
    // natural boundary condition I'(0) = -K0 I(0) emerges from the weak form
    CHECK(std::abs(pairs[i].deriv(0.0) + p.K0 * pairs[i](0.0)) < 2e-4 * std::max(1.0, std::abs(pairs[i](0.0))));
  }
}

TEST_CASE("Robin eigenfunctions satisfy the ODE pointwise") {
  auto p = Parameters::make(2.0, 2);
  auto pairs = solve_kappa(p, 3, 64);
  for (const auto& ep : pairs) {
    for (double xi = 0.25; xi <= 8.0; xi += 0.25) {
      const double res = -(ep.deriv2(xi) - 0.5 * xi * ep.deriv(xi)) - ep.kappa * ep(xi);
      CHECK(std::abs(res) < 1e-6);
    }
  }
}

TEST_CASE("ground eigenfunction agrees with the confluent closed form") {
  auto p = Parameters::make(2.0, 2);
  auto pairs = solve_kappa(p, 1, 64);
  FirstEigenfunction I1(p);
  CHECK(inner_half_line([&](double x) { return I1(x); }, [&](double x) { return I1(x); }) == doctest::Approx(1.0).epsilon(1e-10));
  for (double xi = 0.0; xi <= 8.0; xi += 0.5) {
    CHECK(std::abs(pairs[0](xi) - I1(xi)) < 1e-6);
  }
}

TEST_CASE("first eigenfunction derivative identities") {
  auto p = Parameters::make(2.0, 2);
  FirstEigenfunction I1(p);
  const double h = 1e-4;
  for (double xi : {0.5, 1.5, 3.0, 5.0}) {
    CHECK(I1.deriv(xi) == doctest::Approx((I1(xi + h) - I1(xi - h)) / (2 * h)).epsilon(1e-6));
    CHECK(I1.deriv2(xi) == doctest::Approx((I1(xi + h) - 2 * I1(xi) + I1(xi - h)) / (h * h)).epsilon(1e-4));
  }
  // Robin boundary condition at the closed-form level
  CHECK(I1.deriv(0.0) == doctest::Approx(-p.K0 * I1(0.0)).epsilon(1e-9));
}

TEST_CASE("neutral mode: normalization, kernel property, nodal radius") {
  for (int n : {2, 3}) {
    auto p = Parameters::make(2.0, n);
    auto E = neutral_mode(p);
    // unit norm in the weighted half-space product measure
    auto hs = quad::half_space_rule(n, 240, 14.0);
    const double nrm2 = hs.apply([&](double r, double z) {
      const double v = E(r, z);
      return v * v;
    });
    CHECK(nrm2 == doctest::Approx(1.0).epsilon(1e-7));
    // annihilated by the linearized drift operator (lambda = 0 means the
    // residual equals m*E - m*E after the kappa_1 + 1 tangential shift)
    for (double r : {0.0, 1.0, 2.5}) {
      for (double z : {0.1, 1.0, 3.0}) {
        CHECK(std::abs(E.operator_residual(r, z) - 0.0 * E(r, z)) < 1e-6);
      }
    }
    // boundary trace changes sign exactly at |y'| = sqrt(2(n-1))
    const double rstar = std::sqrt(2.0 * (n - 1));
    CHECK(E.boundary(rstar - 0.01) * E.boundary(rstar + 0.01) < 0.0);
    CHECK(std::abs(E.boundary(rstar)) < 1e-12);
  }
  CHECK_THROWS(neutral_mode(Parameters::make(2.0, 1)));
}

TEST_CASE("neutral mode solves the eigenvalue equation with lambda zero") {
  // full check: -(Lap E - y.grad E / 2 - m E) = 0 including normal direction,
  // assembled by finite differences in both variables
  auto p = Parameters::make(2.0, 2);
  auto E = neutral_mode(p);
  const double h = 1e-4;
  for (double r : {0.5, 1.5, 3.0}) {
    for (double z : {0.5, 1.5, 3.0}) {
      const double Err = (E(r + h, z) - 2 * E(r, z) + E(r - h, z)) / (h * h);
      const double Ezz = (E(r, z + h) - 2 * E(r, z) + E(r, z - h)) / (h * h);
      const double Er = (E(r + h, z) - E(r - h, z)) / (2 * h);
      const double Ez = (E(r, z + h) - E(r, z - h)) / (2 * h);
      const double res = Err + Ezz - 0.5 * (r * Er + z * Ez) - p.m * E(r, z);
      CHECK(std::abs(res) < 1e-5);
    }
  }
}

TEST_CASE("nu_q positive across parameters, closed form at n=2 q=2") {
  for (double q : {1.5, 2.0, 3.0}) CHECK(nu_q(Parameters::make(q, 2)) > 0.0);
  for (double q : {1.5, 2.0, 2.9}) CHECK(nu_q(Parameters::make(q, 3)) > 0.0);
  // n=2: boundary cubic integral reduces to a Hermite triple product,
  // integral of (c c2 (xi^2-2) I1(0))^3 rho dxi = c^3 c2^3 I1(0)^3 * 128 sqrt(pi)
  auto p = Parameters::make(2.0, 2);
  FirstEigenfunction I1(p);
  const double c2 = 1.0 / std::sqrt(16.0 * kSqrtPi);
  const double c = 1.0;  // n=2: (n-1)(2 sqrt(pi))^{n-2} = 1
  const double cubic = std::pow(c * c2 * I1(0.0), 3) * 128.0 * kSqrtPi;
  const double inv = 0.5 * p.q * (p.q - 1.0) * std::pow(p.B, p.q - 2.0) * cubic;
  CHECK(nu_q(p) == doctest::Approx(1.0 / inv).epsilon(1e-8));
}

TEST_CASE("indexed eigenvalues: the three landmark modes") {
  auto p = Parameters::make(2.0, 2);
  auto table = enumerate_lambda(p, 3, 4);
  auto find = [&](int tot, int kn) -> double {
    for (const auto& ie : table) {
      int s = 0;
      for (size_t i = 0; i + 1 < ie.alpha.size(); ++i) s += ie.alpha[i];
      if (s == tot && ie.alpha.back() == kn) return ie.lambda;
    }
    FAIL("mode not found");
    return 0.0;
  };
  CHECK(find(0, 1) == doctest::Approx(-1.0).epsilon(1e-8));   // pure normal ground mode
  CHECK(find(1, 1) == doctest::Approx(-0.5).epsilon(1e-8));   // one tangential unit
  CHECK(std::abs(find(2, 1)) < 1e-8);                         // the neutral mode
  // everything else in the table sits strictly above zero
  int nonpos = 0;
  for (const auto& ie : table) {
    if (ie.lambda < 1e-8) ++nonpos;
  }
  CHECK(nonpos == 3);
}
