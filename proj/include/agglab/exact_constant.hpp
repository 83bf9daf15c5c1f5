#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "agglab/quadrature.hpp"

namespace agglab {

using cplx = std::complex<double>;

/// Constant-kernel solution in transform variables, d = 1. The transform is
/// F(t, zeta, xi) = \int\int e^{-m zeta} e^{-i p xi} f(t, m, p) dm dp.
struct TransformSolution {
  double H0 = 1.0;  // 1 / M_{0,0}(0)
  double A = 1.0;   // H0^2 M_{1,0}(0)
  double B = 0.5;   // (H0^2 / 2) M_{0,2}(0)
  std::function<cplx(cplx zeta, double xi)> F0;

  /// f_in = N rate e^{-rate m} (x) N(0, sigma^2): F0 = N rate/(rate + zeta) e^{-sigma^2 xi^2/2}.
  static TransformSolution exponential_gaussian(double number = 1.0, double rate = 1.0,
                                                double sigma = 1.0);
};

/// (A, B) from the initial mass and second impulsion moments.
std::pair<double, double> compute_AB(double M10, double M02, double H0);

/// H0^2 / ((H0 + t/2)^2 (1/F0 - H0 (t/2)/(H0 + t/2))). Throws std::domain_error
/// if F0 vanishes at (zeta, xi).
cplx F_exact(const TransformSolution& sol, double t, cplx zeta, double xi);

/// 1/(H0 + t/2).
double M0_exact(const TransformSolution& sol, double t);

/// |dF/dt (centered, step h) - (F^2/2 - M0 F)|.
double bernoulli_residual(const TransformSolution& sol, double t, cplx zeta, double xi, double h);

/// 4 H0^2 / (A zeta + B xi^2 + 2 H0^2). Throws std::domain_error at a pole.
double psi_infty(const TransformSolution& sol, double zeta, double xi);

/// For each t: max over the grid of |t F(t, zeta/t, xi/sqrt t) - psi_infty(zeta, xi)|.
std::vector<double> rescaled_limit_check(const TransformSolution& sol,
                                         const std::vector<double>& t_list,
                                         const std::vector<std::pair<double, double>>& grid);

/// \int\int M^alpha |P|^beta phi_infty from the Taylor coefficients of psi_infty:
/// alpha! beta! C(n, alpha) A^alpha B^{beta/2} (4H0^2) / (2H0^2)^{n+1}, n = alpha + beta/2.
/// Throws std::invalid_argument for odd or negative beta.
double limit_profile_moments(const TransformSolution& sol, int alpha, int beta);

/// Gaussian width of the real-space limit profile.
enum class ProfileWidth {
  Transform,  // D = 2B/A: the transform of the profile is psi_infty
  Displayed,  // D = B/A with prefactor 4H0^2/sqrt(2 pi A B)
};

/// C e^{-a m} e^{-p^2/(2 D m)} / sqrt(m), a = 2H0^2/A. Throws std::domain_error for m <= 0.
double phi_infty_profile(const TransformSolution& sol, double m, double p,
                         ProfileWidth width = ProfileWidth::Transform);

struct ProfileCoefficients {
  double C, a, D;
};
ProfileCoefficients profile_coefficients(const TransformSolution& sol, ProfileWidth width);

/// \int\int e^{-m zeta} cos(p xi) phi dm dp by nested adaptive quadrature after
/// m = u^2. The m range is cut at 40/a and |p| at sqrt(60 D m) (Gaussian tail
/// below e^{-30}).
double profile_transform_quadrature(const TransformSolution& sol, double zeta, double xi,
                                    ProfileWidth width = ProfileWidth::Transform,
                                    const Quadrature& quad = {1e-10, 15});

/// \int\int m^alpha |p|^beta phi by the same quadrature.
double profile_moment_quadrature(const TransformSolution& sol, int alpha, int beta,
                                 ProfileWidth width = ProfileWidth::Transform,
                                 const Quadrature& quad = {1e-10, 15});

enum class PhiKind { ZPlusOne, One, Z, Custom };

/// Self-similar family g_hat(zeta, xi) = 2 / (2 zeta Phi(xi^2/zeta) + 1).
struct SelfSimProfile {
  PhiKind kind = PhiKind::ZPlusOne;
  std::function<double(double)> custom;

  static SelfSimProfile z_plus_one() { return {PhiKind::ZPlusOne, {}}; }
  static SelfSimProfile one() { return {PhiKind::One, {}}; }
  static SelfSimProfile z() { return {PhiKind::Z, {}}; }
  static SelfSimProfile from(std::function<double(double)> phi) {
    return {PhiKind::Custom, std::move(phi)};
  }

  double Phi(double z) const;
};

/// Throws std::domain_error for zeta <= 0 or at a pole.
double g_hat(const SelfSimProfile& prof, double zeta, double xi);

/// Centered-difference residual of zeta G_zeta + (1/2) xi G_xi = G - 1/2 with
/// G = 1/g_hat.
double selfsim_transform_pde_residual(const SelfSimProfile& prof, double zeta, double xi, double h);

}  // namespace agglab
