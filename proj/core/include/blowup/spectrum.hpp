#pragma once

#include <array>
#include <memory>
#include <vector>

#include "blowup/accuracy.hpp"
#include "blowup/quadrature.hpp"

namespace blowup::spectrum {

// Problem constants. B is the boundary value of the stationary profile and
// K0 = q B^{q-1} the linearized Robin coefficient; both are derived from q
// through the closed forms, so this struct is the single source of truth.
struct Parameters {
  double q = 2.0;
  int n = 2;
  double m = 0.5;
  double B = 0.0;
  double K0 = 0.0;

  static Parameters make(double q, int n);
};

// First eigenpair of the constant-K Robin problem on the half-line:
// b_K(0) = 1, b_K'(0) = -K, decay exponent mu_K < 0.
class DecayMode {
 public:
  DecayMode(double K, double mu);
  double K() const { return K_; }
  double mu() const { return mu_; }
  double operator()(double xi) const;   // b_K(xi)
  double deriv(double xi) const;        // b_K'(xi)
  double log_deriv(double xi) const;    // B_K(xi) = b_K'/b_K

 private:
  double K_, mu_, u0_;
};

DecayMode solve_mu(double K);

// kappa_1 of the Robin eigenproblem; equals -(m+1).
double kappa1(const Parameters& p);

// k-th half-line Robin eigenpair, rho-normalized and signed by I_k(0) > 0.
// Expanded in polynomials orthonormal for the weight rho on the half-line;
// `recur` carries the (alpha_k, b_k) three-term recurrence of that basis.
class RobinEigenpair {
 public:
  int k = 1;
  double kappa = 0.0;
  std::vector<double> coeffs;
  std::shared_ptr<const std::vector<std::array<double, 2>>> recur;

  double operator()(double xi) const;
  double deriv(double xi) const;
  double deriv2(double xi) const;
};

// Computes eigenpairs k = 1..kmax by a Galerkin discretization in the
// half-line orthogonal polynomial basis.
std::vector<RobinEigenpair> solve_kappa(const Parameters& p, int kmax, int basis_size = 64);

// I_1 from the closed form U(m+1, 1/2, xi^2/4), rho-normalized and positive.
class FirstEigenfunction {
 public:
  explicit FirstEigenfunction(const Parameters& p);
  double operator()(double xi) const;
  double deriv(double xi) const;
  double deriv2(double xi) const;
  double norm_constant() const { return inv_norm_; }

 private:
  double a_;  // = m + 1
  double inv_norm_;
};

// The normalized kernel element of the linearization,
// E(y) = c (H_2(y_1) + ... + H_2(y_{n-1})) I_1(y_n). Axisymmetric:
// the tangential factor is c2 (|y'|^2 - 2(n-1)).
class NeutralMode {
 public:
  explicit NeutralMode(const Parameters& p);
  double operator()(double r, double z) const;   // at (|y'|, y_n)
  double boundary(double r) const;               // at (|y'|, 0)
  double norm_c() const { return c_; }
  const FirstEigenfunction& I1() const { return *I1_; }
  const Parameters& params() const { return p_; }
  // pointwise residual of the linearized operator: -(Lap E - y/2 grad E - m E)
  double operator_residual(double r, double z) const;

 private:
  Parameters p_;
  std::shared_ptr<FirstEigenfunction> I1_;
  double c_;
};

NeutralMode neutral_mode(const Parameters& p);

// nu_q from the boundary cubic integral of the neutral mode,
// nu_q^{-1} = (q(q-1) B^{q-2} / 2) int E^3 rho dy' > 0.
double nu_q(const Parameters& p);

// lambda_alpha = sum_i alpha_i / 2 + kappa_{alpha_n} + m over a small index
// set; used to report which indices realize the eigenvalues -1, -1/2, 0.
struct IndexedEigenvalue {
  std::vector<int> alpha;  // alpha_1..alpha_{n-1}, alpha_n
  double lambda;
};
std::vector<IndexedEigenvalue> enumerate_lambda(const Parameters& p, int max_tangential, int max_normal);

}  // namespace blowup::spectrum
