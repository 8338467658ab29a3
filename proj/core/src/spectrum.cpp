#include "blowup/spectrum.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "blowup/specfun.hpp"

namespace blowup::spectrum {

using specfun::g_ratio;
using specfun::gamma_fn;
using specfun::hermite_norm;
using specfun::hermite_norm_deriv;
using specfun::hermite_norm_deriv2;
using specfun::tricomi_u;
using specfun::tricomi_u_dxi;
using specfun::tricomi_u_dxi2;

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;

using Recurrence = std::vector<std::array<double, 2>>;  // (alpha_k, b_k)

// orthonormal polynomials for the weight e^{-x^2/4} on the half line, built
// by the discrete Stieltjes procedure on a Gauss-Legendre grid. The raw
// Hermite restrictions are too ill-conditioned past N ~ 20 for this use.
Recurrence stieltjes_basis(int N, const std::vector<double>& x, const std::vector<double>& w,
                           std::vector<std::vector<double>>& P) {
  const size_t M = x.size();
  std::vector<double> rho(M);
  for (size_t a = 0; a < M; ++a) rho[a] = w[a] * std::exp(-0.25 * x[a] * x[a]);
  Recurrence ab(N + 1, {0.0, 0.0});
  P.assign(N, std::vector<double>(M, 0.0));
  double mu0 = 0.0;
  for (size_t a = 0; a < M; ++a) mu0 += rho[a];
  ab[0] = {0.0, std::sqrt(mu0)};
  for (size_t a = 0; a < M; ++a) P[0][a] = 1.0 / ab[0][1];
  std::vector<double> next(M);
  for (int k = 0; k + 1 <= N; ++k) {
    double alpha = 0.0;
    for (size_t a = 0; a < M; ++a) alpha += rho[a] * x[a] * P[k][a] * P[k][a];
    ab[k][0] = alpha;
    double nb2 = 0.0;
    for (size_t a = 0; a < M; ++a) {
      next[a] = (x[a] - alpha) * P[k][a] - (k > 0 ? ab[k][1] * P[k - 1][a] : 0.0);
      nb2 += rho[a] * next[a] * next[a];
    }
    const double b = std::sqrt(nb2);
    ab[k + 1][1] = b;
    if (k + 1 < N) {
      for (size_t a = 0; a < M; ++a) P[k + 1][a] = next[a] / b;
    }
  }
  return ab;
}

// evaluates sum_k c_k p_k and its first two derivatives at xi by running the
// recurrence p_{k+1} = ((x - alpha_k) p_k - b_k p_{k-1}) / b_{k+1}
void ortho_eval(const Recurrence& ab, const std::vector<double>& c, double xi, double out[3]) {
  const int N = int(c.size());
  double p = 1.0 / ab[0][1], pm = 0.0;
  double dp = 0.0, dpm = 0.0, d2p = 0.0, d2pm = 0.0;
  out[0] = c.empty() ? 0.0 : c[0] * p;
  out[1] = out[2] = 0.0;
  for (int k = 0; k + 1 < N; ++k) {
    const double A = xi - ab[k][0], b = ab[k][1], bn = ab[k + 1][1];
    const double pn = (A * p - b * pm) / bn;
    const double dpn = (A * dp + p - b * dpm) / bn;
    const double d2pn = (A * d2p + 2.0 * dp - b * d2pm) / bn;
    pm = p; p = pn;
    dpm = dp; dp = dpn;
    d2pm = d2p; d2p = d2pn;
    out[0] += c[k + 1] * p;
    out[1] += c[k + 1] * dp;
    out[2] += c[k + 1] * d2p;
  }
}

// solves g(lambda) = target on lambda > 0 by bracket + bisection/secant
double invert_g(double target) {
  if (target <= 0) throw std::domain_error("invert_g: target must be > 0");
  double lo = 1e-8, hi = 1.0;
  while (g_ratio(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) throw std::runtime_error("invert_g: bracket failure, endpoints " + std::to_string(lo) + ", " + std::to_string(hi));
  }
  // bisection to a narrow bracket, then secant polish
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g_ratio(mid) < target ? lo : hi) = mid;
  }
  double x0 = lo, x1 = hi;
  double f0 = g_ratio(x0) - target, f1 = g_ratio(x1) - target;
  for (int it = 0; it < 10 && f1 != f0; ++it) {
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(x2) || x2 <= 0) break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = g_ratio(x1) - target;
    if (std::abs(f1) < 1e-15 * target) break;
  }
  return x1;
}
}  // namespace

Parameters Parameters::make(double q, int n) {
  if (q <= 1.0) throw std::invalid_argument("Parameters: q must be > 1");
  if (n < 1) throw std::invalid_argument("Parameters: n must be >= 1");
  if (n >= 3 && q >= double(n) / (n - 2)) throw std::invalid_argument("Parameters: q must be < n/(n-2) for n >= 3");
  Parameters p;
  p.q = q;
  p.n = n;
  p.m = 0.5 / (q - 1.0);
  p.B = std::pow(p.m * gamma_fn(p.m + 0.5) / gamma_fn(p.m + 1.0), 1.0 / (q - 1.0));
  p.K0 = q * p.m * gamma_fn(p.m + 0.5) / gamma_fn(p.m + 1.0);
  return p;
}

// ---------------------------------------------------------------------------
// decay modes b_K

DecayMode::DecayMode(double K, double mu) : K_(K), mu_(mu) { u0_ = tricomi_u(-mu_, 0.0); }

double DecayMode::operator()(double xi) const { return tricomi_u(-mu_, 0.25 * xi * xi) / u0_; }

double DecayMode::deriv(double xi) const { return tricomi_u_dxi(-mu_, xi) / u0_; }

double DecayMode::log_deriv(double xi) const { return deriv(xi) / (*this)(xi); }

DecayMode solve_mu(double K) {
  if (K <= 0) throw std::domain_error("solve_mu: K must be > 0");
  // boundary derivative identity: K = (-mu) Gamma(-mu+1/2)/Gamma(-mu+1) = g(-mu)
  const double lambda = invert_g(K);
  return DecayMode(K, -lambda);
}

double kappa1(const Parameters& p) {
  const double lambda = invert_g(p.K0);
  if (!(lambda > 0 && lambda < p.m + 10.0))
    throw std::runtime_error("kappa1: root not found in (-(m+10), 0)");
  return -lambda;
}

// ---------------------------------------------------------------------------
// Galerkin spectrum in the scaled Hermite basis

double RobinEigenpair::operator()(double xi) const {
  double out[3];
  ortho_eval(*recur, coeffs, xi, out);
  return out[0];
}
double RobinEigenpair::deriv(double xi) const {
  double out[3];
  ortho_eval(*recur, coeffs, xi, out);
  return out[1];
}
double RobinEigenpair::deriv2(double xi) const {
  double out[3];
  ortho_eval(*recur, coeffs, xi, out);
  return out[2];
}

std::vector<RobinEigenpair> solve_kappa(const Parameters& p, int kmax, int basis_size) {
  const int N = basis_size;
  // quadrature exact enough for products of degree <= 2N polynomials
  std::vector<double> x, w;
  quad::gauss_legendre(std::max(400, 8 * N), 0.0, 28.0, x, w);
  std::vector<std::vector<double>> P;
  auto ab = std::make_shared<Recurrence>(stieltjes_basis(N, x, w, P));
  // node values of p_k' via the differentiated recurrence
  std::vector<std::vector<double>> D(N, std::vector<double>(x.size(), 0.0));
  for (int k = 0; k + 1 < N; ++k) {
    for (size_t a = 0; a < x.size(); ++a) {
      const double A = x[a] - (*ab)[k][0];
      D[k + 1][a] = (A * D[k][a] + P[k][a] - (k > 0 ? (*ab)[k][1] * D[k - 1][a] : 0.0)) / (*ab)[k + 1][1];
    }
  }
  std::vector<double> p0(N), d0(N);
  p0[0] = 1.0 / (*ab)[0][1];
  d0[0] = 0.0;
  for (int k = 0; k + 1 < N; ++k) {
    const double A = -(*ab)[k][0];
    p0[k + 1] = (A * p0[k] - (k > 0 ? (*ab)[k][1] * p0[k - 1] : 0.0)) / (*ab)[k + 1][1];
    d0[k + 1] = (A * d0[k] + p0[k] - (k > 0 ? (*ab)[k][1] * d0[k - 1] : 0.0)) / (*ab)[k + 1][1];
  }
  Eigen::MatrixXd S(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      double s = 0.0;
      for (size_t a = 0; a < x.size(); ++a) {
        s += w[a] * std::exp(-0.25 * x[a] * x[a]) * D[i][a] * D[j][a];
      }
      // weak Robin term: - K0 I(0) J(0)
      s -= p.K0 * p0[i] * p0[j];
      S(i, j) = S(j, i) = s;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw std::runtime_error("solve_kappa: eigensolver failed");
  std::vector<RobinEigenpair> out;
  for (int k = 0; k < kmax && k < N; ++k) {
    RobinEigenpair ep;
    ep.k = k + 1;
    ep.kappa = es.eigenvalues()(k);
    ep.coeffs.assign(N, 0.0);
    ep.recur = ab;
    for (int j = 0; j < N; ++j) ep.coeffs[j] = es.eigenvectors()(j, k);
    // basis is orthonormal, so only the sign at the origin needs pinning
    if (ep(0.0) < 0.0) {
      for (double& c : ep.coeffs) c = -c;
    }
    out.push_back(std::move(ep));
  }
  return out;
}

// ---------------------------------------------------------------------------
// I_1 closed form and the neutral mode

FirstEigenfunction::FirstEigenfunction(const Parameters& p) : a_(p.m + 1.0) {
  const double a = a_;
  const double nrm2 = specfun::integrate_half_line([a](double xi) {
    const double u = tricomi_u(a, 0.25 * xi * xi);
    return u * u * std::exp(-0.25 * xi * xi);
  });
  inv_norm_ = 1.0 / std::sqrt(nrm2);
}

double FirstEigenfunction::operator()(double xi) const { return inv_norm_ * tricomi_u(a_, 0.25 * xi * xi); }
double FirstEigenfunction::deriv(double xi) const { return inv_norm_ * tricomi_u_dxi(a_, xi); }
double FirstEigenfunction::deriv2(double xi) const { return inv_norm_ * tricomi_u_dxi2(a_, xi); }

namespace {
// tangential quadratic factor sum H_2(y_i) = c2 (|y'|^2 - 2(n-1))
double c2_const() {
  // c_2 = 1/sqrt(2 sqrt(pi) * 2^2 * 2!) = 1/sqrt(16 sqrt(pi))
  return 1.0 / std::sqrt(16.0 * kSqrtPi);
}
}  // namespace

NeutralMode::NeutralMode(const Parameters& p) : p_(p), I1_(std::make_shared<FirstEigenfunction>(p)) {
  if (p.n < 2) throw std::invalid_argument("NeutralMode: requires n >= 2");
  // cross terms vanish, so ||sum H_2(y_i)||^2 = (n-1) (2 sqrt(pi))^{n-2}
  c_ = 1.0 / std::sqrt((p.n - 1) * std::pow(2.0 * kSqrtPi, p.n - 2));
}

double NeutralMode::operator()(double r, double z) const {
  return c_ * c2_const() * (r * r - 2.0 * (p_.n - 1)) * (*I1_)(z);
}

double NeutralMode::boundary(double r) const { return (*this)(r, 0.0); }

double NeutralMode::operator_residual(double r, double z) const {
  const double c2 = c2_const();
  const double T = c2 * (r * r - 2.0 * (p_.n - 1));         // tangential factor
  const double lapT = c2 * 2.0 * (p_.n - 1);                // sum of second derivatives
  const double ygradT = c2 * 2.0 * r * r;                   // y' . grad' T
  const double I = (*I1_)(z), Iz = I1_->deriv(z), Izz = I1_->deriv2(z);
  const double lap = c_ * (lapT * I + T * Izz);
  const double ygrad = c_ * (ygradT * I + T * z * Iz);
  const double E = c_ * T * I;
  return -(lap - 0.5 * ygrad - p_.m * E);
}

NeutralMode neutral_mode(const Parameters& p) { return NeutralMode(p); }

double nu_q(const Parameters& p) {
  if (p.n < 2) throw std::invalid_argument("nu_q: requires n >= 2");
  NeutralMode E(p);
  auto rule = quad::boundary_rule(p.n, 300, 16.0);
  const double cubic = rule.apply([&](double r) {
    const double e = E.boundary(r);
    return e * e * e;
  });
  if (cubic <= 0.0) throw std::runtime_error("nu_q: non-positive boundary integral (sign convention bug)");
  const double inv = 0.5 * p.q * (p.q - 1.0) * std::pow(p.B, p.q - 2.0) * cubic;
  return 1.0 / inv;
}

std::vector<IndexedEigenvalue> enumerate_lambda(const Parameters& p, int max_tangential, int max_normal) {
  auto pairs = solve_kappa(p, max_normal, 64);
  std::vector<IndexedEigenvalue> out;
  // tangential indices enumerated as total degree sum over n-1 slots; for the
  // report we only need sum alpha_i, so emit one representative per total.
  for (int tot = 0; tot <= max_tangential; ++tot) {
    for (int kn = 1; kn <= max_normal; ++kn) {
      IndexedEigenvalue ie;
      ie.alpha.assign(p.n, 0);
      ie.alpha[0] = tot;
      ie.alpha[p.n - 1] = kn;
      const double kap = (kn == 1) ? kappa1(p) : pairs[kn - 1].kappa;
      ie.lambda = 0.5 * tot + kap + p.m;
      out.push_back(std::move(ie));
    }
  }
  return out;
}

}  // namespace blowup::spectrum
