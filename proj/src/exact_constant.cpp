#include "agglab/exact_constant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace agglab {

TransformSolution TransformSolution::exponential_gaussian(double number, double rate, double sigma) {
  if (!(number > 0.0) || !(rate > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("exponential-gaussian datum needs positive parameters");
  TransformSolution s;
  s.H0 = 1.0 / number;
  std::tie(s.A, s.B) = compute_AB(number / rate, number * sigma * sigma, s.H0);
  s.F0 = [=](cplx zeta, double xi) {
    return number * rate / (rate + zeta) * std::exp(-0.5 * sigma * sigma * xi * xi);
  };
  return s;
}

std::pair<double, double> compute_AB(double M10, double M02, double H0) {
  if (!(M10 > 0.0) || !(M02 > 0.0) || !(H0 > 0.0))
    throw std::invalid_argument("compute_AB needs positive moments and H0");
  return {H0 * H0 * M10, 0.5 * H0 * H0 * M02};
}

cplx F_exact(const TransformSolution& sol, double t, cplx zeta, double xi) {
  const cplx f0 = sol.F0(zeta, xi);
  if (f0 == cplx(0.0)) throw std::domain_error("initial transform vanishes at the evaluation point");
  const double H = sol.H0 + 0.5 * t;
  return sol.H0 * sol.H0 / (H * H * (1.0 / f0 - sol.H0 * (0.5 * t) / H));
}

double M0_exact(const TransformSolution& sol, double t) { return 1.0 / (sol.H0 + 0.5 * t); }

double bernoulli_residual(const TransformSolution& sol, double t, cplx zeta, double xi, double h) {
  const cplx dF = (F_exact(sol, t + h, zeta, xi) - F_exact(sol, t - h, zeta, xi)) / (2.0 * h);
  const cplx F = F_exact(sol, t, zeta, xi);
  return std::abs(dF - (0.5 * F * F - M0_exact(sol, t) * F));
}

double psi_infty(const TransformSolution& sol, double zeta, double xi) {
  const double den = sol.A * zeta + sol.B * xi * xi + 2.0 * sol.H0 * sol.H0;
  if (den == 0.0) throw std::domain_error("psi_infty evaluated at its pole");
  return 4.0 * sol.H0 * sol.H0 / den;
}

std::vector<double> rescaled_limit_check(const TransformSolution& sol,
                                         const std::vector<double>& t_list,
                                         const std::vector<std::pair<double, double>>& grid) {
  std::vector<double> out;
  out.reserve(t_list.size());
  for (double t : t_list) {
    if (!(t > 0.0)) throw std::invalid_argument("rescaled check needs t > 0");
    double dev = 0.0;
    for (auto [zeta, xi] : grid) {
      const cplx v = t * F_exact(sol, t, zeta / t, xi / std::sqrt(t));
      dev = std::max(dev, std::abs(v - psi_infty(sol, zeta, xi)));
    }
    out.push_back(dev);
  }
  return out;
}

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

double limit_profile_moments(const TransformSolution& sol, int alpha, int beta) {
  if (alpha < 0 || beta < 0 || beta % 2 != 0)
    throw std::invalid_argument("limit profile moments need alpha >= 0 and even beta >= 0");
  const int j = beta / 2, n = alpha + j;
  const double K = 2.0 * sol.H0 * sol.H0;
  const double binom = factorial(n) / (factorial(alpha) * factorial(j));
  return factorial(alpha) * factorial(beta) * binom * std::pow(sol.A, alpha) * std::pow(sol.B, j) *
         (4.0 * sol.H0 * sol.H0) / std::pow(K, n + 1);
}

ProfileCoefficients profile_coefficients(const TransformSolution& sol, ProfileWidth width) {
  const double H2 = sol.H0 * sol.H0, A = sol.A, B = sol.B;
  const double a = 2.0 * H2 / A;
  if (width == ProfileWidth::Transform)
    return {2.0 * H2 / std::sqrt(std::numbers::pi * A * B), a, 2.0 * B / A};
  return {4.0 * H2 / std::sqrt(2.0 * std::numbers::pi * A * B), a, B / A};
}

double phi_infty_profile(const TransformSolution& sol, double m, double p, ProfileWidth width) {
  if (!(m > 0.0)) throw std::domain_error("limit profile needs m > 0");
  const auto c = profile_coefficients(sol, width);
  return c.C * std::exp(-c.a * m - p * p / (2.0 * c.D * m)) / std::sqrt(m);
}

namespace {

// \int_0^U du 2C u^{1 + 2 alpha} e^{-a u^2} w(u) \int dq g(q) e^{-q^2/(2D)},
// the profile integral after m = u^2, p = u q.
template <typename Outer, typename Inner>
double profile_integral(const ProfileCoefficients& c, const Quadrature& quad, Outer outer,
                        Inner inner) {
  const double U = std::sqrt(40.0 / c.a);
  const double Q = std::sqrt(60.0 * c.D);
  return quad(
      [&](double u) {
        if (u == 0.0) return 0.0;
        const double in =
            quad([&](double q) { return inner(u, q) * std::exp(-q * q / (2.0 * c.D)); }, -Q, Q);
        return 2.0 * c.C * u * outer(u) * in;
      },
      0.0, U);
}

}  // namespace

double profile_transform_quadrature(const TransformSolution& sol, double zeta, double xi,
                                    ProfileWidth width, const Quadrature& quad) {
  const auto c = profile_coefficients(sol, width);
  return profile_integral(
      c, quad, [&](double u) { return std::exp(-(c.a + zeta) * u * u); },
      [&](double u, double q) { return std::cos(u * q * xi); });
}

double profile_moment_quadrature(const TransformSolution& sol, int alpha, int beta,
                                 ProfileWidth width, const Quadrature& quad) {
  const auto c = profile_coefficients(sol, width);
  return profile_integral(
      c, quad, [&](double u) { return std::pow(u, 2 * alpha + beta) * std::exp(-c.a * u * u); },
      [&](double, double q) { return std::pow(std::abs(q), beta); });
}

double SelfSimProfile::Phi(double z) const {
  switch (kind) {
    case PhiKind::ZPlusOne: return z + 1.0;
    case PhiKind::One: return 1.0;
    case PhiKind::Z: return z;
    case PhiKind::Custom:
      if (!custom) throw std::invalid_argument("custom profile has no evaluator");
      return custom(z);
  }
  return 0.0;
}

double g_hat(const SelfSimProfile& prof, double zeta, double xi) {
  if (!(zeta > 0.0)) throw std::domain_error("g_hat is evaluated for zeta > 0 only");
  const double den = 2.0 * zeta * prof.Phi(xi * xi / zeta) + 1.0;
  if (den == 0.0) throw std::domain_error("g_hat evaluated at a pole");
  return 2.0 / den;
}

double selfsim_transform_pde_residual(const SelfSimProfile& prof, double zeta, double xi, double h) {
  if (!(zeta > h)) throw std::domain_error("residual needs zeta > h");
  auto G = [&](double z, double x) { return 1.0 / g_hat(prof, z, x); };
  const double Gz = (G(zeta + h, xi) - G(zeta - h, xi)) / (2.0 * h);
  const double Gx = (G(zeta, xi + h) - G(zeta, xi - h)) / (2.0 * h);
  return std::abs(zeta * Gz + 0.5 * xi * Gx - (G(zeta, xi) - 0.5));
}

}  // namespace agglab
