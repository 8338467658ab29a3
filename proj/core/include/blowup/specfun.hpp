#pragma once

#include <functional>

#include "blowup/accuracy.hpp"

namespace blowup::specfun {

// Gamma function for positive arguments.
double gamma_fn(double x);
double lgamma_fn(double x);

// g(lambda) = Gamma(lambda + 1/2) / Gamma(lambda), strictly increasing on
// (0, inf). This is the monotone ratio behind the Robin eigenvalue root
// equations.
double g_ratio(double lambda);

// Tricomi confluent hypergeometric function of the second kind with fixed
// second parameter 1/2, via the integral representation
//   U(a, 1/2, r) = (1/Gamma(a)) int_0^inf e^{-rt} t^{a-1} (1+t)^{-a-1/2} dt.
double tricomi_u(double a, double r, const AccuracyPolicy& acc = {});

// d/dxi of U(a, 1/2, xi^2/4), evaluated from the differentiated integral
// representation (exact dU/dr = -a U(a+1, 3/2, r)). At xi = 0 returns the
// limit -a sqrt(pi) / Gamma(a+1).
double tricomi_u_dxi(double a, double xi, const AccuracyPolicy& acc = {});

// d^2/dxi^2 of U(a, 1/2, xi^2/4). Requires xi > 0.
double tricomi_u_dxi2(double a, double xi, const AccuracyPolicy& acc = {});

// Physicists' Hermite polynomial via the three-term recurrence,
// H~_{k+1}(x) = 2 x H~_k(x) - 2 k H~_{k-1}(x). Guarded at k <= 30.
double hermite_phys(int k, double x);

// Scaled Hermite function H_k(xi) = c_k H~_k(xi/2) with c_k chosen so that
// int_-inf^inf H_k(xi)^2 e^{-xi^2/4} dxi = 1. The constant comes from the
// Gaussian moment int H~_k(x)^2 e^{-x^2} dx = sqrt(pi) 2^k k!.
double hermite_norm(int k, double xi);
double hermite_norm_deriv(int k, double xi);
double hermite_norm_deriv2(int k, double xi);

// Adaptive double-exponential quadrature over (0, inf). Exposed because the
// profile/eigen test oracles reuse it. Throws QuadratureError when the
// refinement stalls above the requested tolerance.
double integrate_half_line(const std::function<double(double)>& f, const AccuracyPolicy& acc = {});

}  // namespace blowup::specfun
