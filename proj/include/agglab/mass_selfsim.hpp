#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "agglab/quadrature.hpp"

namespace agglab {

using Vec3 = Eigen::Vector3d;

/// Momentum symbol b(eta) and the profile phi = F^{-1}(e^{-b}) on R^3.
/// Fourier convention: \hat phi(eta) = \int e^{-i p.eta} phi(p) dp.
struct LiftSpec {
  double theta = 0.5;  // b is homogeneous of degree 1/theta

  enum class Symbol { Quadratic, Custom } symbol = Symbol::Quadratic;
  double scale = 1.0;  // Quadratic: b = scale |eta|^2

  // Custom symbol: b, its profile, and whether the caller vouches for phi >= 0.
  std::function<double(const Vec3&)> custom_b;
  std::function<double(const Vec3&)> custom_phi;
  bool certified = false;

  static LiftSpec quadratic(double scale = 1.0) {
    LiftSpec s;
    s.scale = scale;
    return s;
  }

  double b(const Vec3& eta) const;
  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

struct MomentumProfile {
  std::function<double(const Vec3&)> eval;
  bool certified = false;
  /// True when phi depends on |p| only (the radial quadrature applies).
  bool radial = false;

  double operator()(const Vec3& p) const { return eval(p); }
};

/// Quadratic: (4 pi c)^{-3/2} e^{-|p|^2/(4c)}. Custom: the caller's evaluator,
/// certified only if the caller says so.
MomentumProfile phi_from_b(const LiftSpec& spec);

/// max over the grid and s of |b(s eta) - s^{1/theta} b(eta)| / |s^{1/theta} b(eta)|.
double homogeneity_check(const LiftSpec& spec, const std::vector<Vec3>& eta_grid,
                         const std::vector<double>& scales = {0.5, 2.0, 3.0});

/// max over the grid of |e^{-m b} - e^{-m2 b} e^{-(m - m2) b}|. Requires 0 < m2 < m.
double factorization_check(const LiftSpec& spec, double m, double m2,
                           const std::vector<Vec3>& eta_grid);

/// Solution of the mass-only equation
/// dF/dt = 1/2 \int_0^m a(m', m - m') F(m') F(m - m') dm' - F(m) \int_0^inf a(m, m') F(m') dm'.
struct MassSolution {
  std::function<double(double t, double m)> F;
  std::function<double(double m, double m2)> kernel;
  double lambda = 0.0;  // kernel homogeneity
  std::string name;
};

/// T^{-2} e^{-m/T}, T = 1 + t/2: the constant-kernel solution with F(0, m) = e^{-m}.
double smoluchowski_constant_exact(double t, double m);
MassSolution constant_kernel_solution();

/// m^{-3 theta} F(t, m) phi(p / m^theta). Throws std::domain_error for m <= 0.
double lift_solution(const MassSolution& F, const LiftSpec& spec, double t, double m, const Vec3& p);

/// dF/dt - Q_mass(F) at mass m: centered time difference (step h) against the
/// quadrature of the gain and loss integrals.
double mass_equation_residual(const MassSolution& F, double t, double m, double h = 1e-4,
                              const Quadrature& quad = {});

struct Collocation {
  double m;
  Vec3 p;
};

/// max over the points of |d_t f - Q(f)| for the lift f, reduced through the
/// factorization identity to m^{-3 theta} phi(p/m^theta) (dF/dt - Q_mass(F)).
/// Throws std::invalid_argument when F carries no kernel.
double residual_check(const MassSolution& F, const LiftSpec& spec, double t,
                      const std::vector<Collocation>& points, const Quadrature& quad = {});

/// Self-similar mass solution F = nu(t) Phi(mu(t) m).
struct SelfSimilarMass {
  std::function<double(double)> nu, mu, Phi;
};

/// nu mu^{3 theta} Psi(mu m, mu^theta p) with Psi(M, P) = M^{-3 theta} Phi(M) phi(P / M^theta).
double selfsim_lift(const SelfSimilarMass& s, const LiftSpec& spec, double t, double m, const Vec3& p);

/// \int\int |p|^k lift dm dp = \int m^{k theta} F dm * \int |q|^k phi(q) dq, both by
/// quadrature (radial in q).
double pk_moment(const MassSolution& F, const LiftSpec& spec, double k, double t,
                 const Quadrature& quad = {});

struct PkScaling {
  std::vector<double> t;
  std::vector<double> P;
  double slope = 0.0;     // least squares of log P on log t over the last decade
  double expected = 0.0;  // -(1 - k theta)/(1 - lambda)
};

/// Throws std::invalid_argument for k < 0, lambda >= 1, a grid without a full
/// decade, or a non-radial profile.
PkScaling pk_scaling_check(const MassSolution& F, const LiftSpec& spec, double k,
                           const std::vector<double>& t_grid, const Quadrature& quad = {});

}  // namespace agglab
