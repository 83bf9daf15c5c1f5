#pragma once

#include <Eigen/Core>

#include "agglab/kernels.hpp"
#include "agglab/moment_series.hpp"
#include "agglab/particle_sim.hpp"

namespace agglab {

/// Mean of sigma_1^2 over the unit sphere S^{d-1}, i.e. 1/d.
double sphere_constant(int d);

/// Empirical right-hand side of dM_alpha/dt for impulsion moments:
/// (1/2)(1/n0^2) sum_{i != j} a(y_i, y_j) [|p_i + p_j|^alpha - |p_i|^alpha - |p_j|^alpha].
/// O(n^2).
double moment_drift(const KernelSpec& k, const ParticleSystem& sys, double alpha);

/// Even impulsion moments (M_0, M_2, ..., M_{2B}) of a radially symmetric
/// solution under a = |p - p'|^2.
struct Gamma2State {
  int d = 1;
  double k_d = 1.0;
  Eigen::VectorXd values;

  /// Uses k_d = sphere_constant(d).
  static Gamma2State from_moments(int d, Eigen::VectorXd values);
  int max_half_order() const { return static_cast<int>(values.size()) - 1; }
};

/// Time derivative of the closed hierarchy. M_0, M_2, M_4 use the closed
/// equations valid in any dimension:
///   M_0' = -M_2 M_0,  M_2' = -2 k_d M_2^2,  M_4' = (2 - 4 k_d) M_2 M_4,
/// and M_6 onwards the one-dimensional binomial recursion. Throws
/// std::invalid_argument for B > 2 with d != 1, or B < 1.
Eigen::VectorXd gamma2_rhs(const Gamma2State& state);

/// The binomial recursion for dM_{2 alpha}/dt in d = 1, alpha >= 1.
double gamma2_recursion(const Eigen::VectorXd& even_moments, int alpha);

/// Normalized closed forms with s = 1 + 2 k_d M_2(0) t:
///   M_0 = M_0(0) s^{-1/(2 k_d)},  M_2 = M_2(0)/s,  M_4 = M_4(0) s^{1/k_d - 2},
/// and for d = 1, M_6 = (M_6(0) - M_4(0)^2/M_2(0)) s^{3/2} + (M_4(0)^2/M_2(0))/s.
/// Entries beyond the supplied order are left out.
Eigen::VectorXd gamma2_closed_form(const Gamma2State& state0, double t);

struct Gamma2Options {
  double rel_tol = 1e-8;       // step-doubling acceptance
  std::size_t record_stride = 1;
  bool check_cauchy_schwarz = true;
};

/// Classical RK4 on a uniform grid of step `dt` (adjusted so that it divides
/// t_end), checked against a second pass at dt/2. Returns the dt/2 trajectory
/// sampled every `record_stride` coarse steps. Throws std::runtime_error if the
/// two passes disagree beyond `rel_tol`, std::domain_error if the
/// Cauchy-Schwarz chain M_{2b}^2 <= M_{2b-2} M_{2b+2} breaks.
MomentSeries integrate_gamma2(const Gamma2State& state0, double t_end, double dt,
                              const Gamma2Options& opts = {});

/// M_{-1/3,1}(t) <= 1/(A + t/4), A = 1/A_inv, for the hard-sphere kernel.
/// Passes at t iff mean <= bound (1 + tol) + nsigma * stderr.
BoundReport check_hs_bound(const MomentSeries& series, double A_inv, double tol = 0.05,
                           double nsigma = 3.0);

/// Initial impulsion moments for the gamma = 1, d = 1 brackets.
struct Gamma1Initial {
  double M0 = 1.0;
  double M1 = 1.0;
  double M2 = 1.0;
  double M3 = 1.0;
};

/// Explicit moment brackets for a = |p - p'|, d = 1, on the columns
/// (0,0), (0,1), (0,2), (0,3) that are present, plus step-to-step
/// monotonicity of M_2 and M_3. Throws std::invalid_argument if the series
/// metadata does not name that kernel in d = 1.
BoundReport check_gamma1_brackets(const MomentSeries& series, const Gamma1Initial& init,
                                  double tol = 0.05, double nsigma = 3.0);

/// r(t) = (1/M(t) - 1/M(0)) / t on t > 0 must stay in a fixed positive
/// interval: min r > 0 and max r / min r <= ratio_limit. The series must
/// start at t = 0. Throws std::domain_error if M(t) = 0.
BoundReport check_gamma_bracket_scaling(const MomentSeries& series, MomentKey key,
                                        double ratio_limit = 10.0);

}  // namespace agglab
