#include "agglab/mass_selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace agglab {

double LiftSpec::b(const Vec3& eta) const {
  if (symbol == Symbol::Quadratic) return scale * eta.squaredNorm();
  if (!custom_b) throw std::invalid_argument("custom symbol has no evaluator");
  return custom_b(eta);
}

void LiftSpec::validate() const {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (symbol == Symbol::Quadratic) {
    if (!(scale > 0.0)) throw std::invalid_argument("quadratic symbol needs a positive scale");
    if (theta != 0.5) throw std::invalid_argument("a quadratic symbol has theta = 1/2");
  } else if (!custom_b || !custom_phi) {
    throw std::invalid_argument("custom symbol needs both b and phi evaluators");
  }
}

MomentumProfile phi_from_b(const LiftSpec& spec) {
  spec.validate();
  if (spec.symbol == LiftSpec::Symbol::Custom) return {spec.custom_phi, spec.certified, false};
  const double c = spec.scale;
  const double norm = std::pow(4.0 * std::numbers::pi * c, -1.5);
  return {[=](const Vec3& p) { return norm * std::exp(-p.squaredNorm() / (4.0 * c)); }, true, true};
}

double homogeneity_check(const LiftSpec& spec, const std::vector<Vec3>& eta_grid,
                         const std::vector<double>& scales) {
  double worst = 0.0;
  for (const auto& eta : eta_grid) {
    for (double s : scales) {
      const double want = std::pow(s, 1.0 / spec.theta) * spec.b(eta);
      const double got = spec.b(s * eta);
      if (want == 0.0) {
        worst = std::max(worst, std::abs(got));
      } else {
        worst = std::max(worst, std::abs(got - want) / std::abs(want));
      }
    }
  }
  return worst;
}

double factorization_check(const LiftSpec& spec, double m, double m2,
                           const std::vector<Vec3>& eta_grid) {
  if (!(m2 > 0.0) || !(m2 < m)) throw std::invalid_argument("factorization needs 0 < m2 < m");
  double worst = 0.0;
  for (const auto& eta : eta_grid) {
    const double b = spec.b(eta);
    worst = std::max(worst, std::abs(std::exp(-m * b) - std::exp(-m2 * b) * std::exp(-(m - m2) * b)));
  }
  return worst;
}

double smoluchowski_constant_exact(double t, double m) {
  const double T = 1.0 + 0.5 * t;
  return std::exp(-m / T) / (T * T);
}

MassSolution constant_kernel_solution() {
  return {smoluchowski_constant_exact, [](double, double) { return 1.0; }, 0.0,
          "constant-kernel exact"};
}

double lift_solution(const MassSolution& F, const LiftSpec& spec, double t, double m, const Vec3& p) {
  if (!(m > 0.0)) throw std::domain_error("lift needs m > 0");
  const auto phi = phi_from_b(spec);
  const double mt = std::pow(m, spec.theta);
  return std::pow(m, -3.0 * spec.theta) * F.F(t, m) * phi(p / mt);
}

double mass_equation_residual(const MassSolution& F, double t, double m, double h,
                              const Quadrature& quad) {
  if (!F.kernel) throw std::invalid_argument("mass solution carries no kernel");
  const double dF = (F.F(t + h, m) - F.F(t - h, m)) / (2.0 * h);
  const double gain =
      0.5 * quad([&](double x) { return F.kernel(x, m - x) * F.F(t, x) * F.F(t, m - x); }, 0.0, m);
  const double loss =
      F.F(t, m) *
      quad([&](double x) { return F.kernel(m, x) * F.F(t, x); }, 0.0,
           std::numeric_limits<double>::infinity());
  return dF - (gain - loss);
}

double residual_check(const MassSolution& F, const LiftSpec& spec, double t,
                      const std::vector<Collocation>& points, const Quadrature& quad) {
  const auto phi = phi_from_b(spec);
  double worst = 0.0;
  for (const auto& c : points) {
    if (!(c.m > 0.0)) throw std::domain_error("collocation needs m > 0");
    const double weight = std::pow(c.m, -3.0 * spec.theta) * phi(c.p / std::pow(c.m, spec.theta));
    worst = std::max(worst, std::abs(weight * mass_equation_residual(F, t, c.m, 1e-4, quad)));
  }
  return worst;
}

double selfsim_lift(const SelfSimilarMass& s, const LiftSpec& spec, double t, double m, const Vec3& p) {
  if (!(m > 0.0)) throw std::domain_error("lift needs m > 0");
  const auto phi = phi_from_b(spec);
  const double th = spec.theta, mu = s.mu(t);
  const double M = mu * m;
  const Vec3 P = std::pow(mu, th) * p;
  const double Psi = std::pow(M, -3.0 * th) * s.Phi(M) * phi(P / std::pow(M, th));
  return s.nu(t) * std::pow(mu, 3.0 * th) * Psi;
}

double pk_moment(const MassSolution& F, const LiftSpec& spec, double k, double t,
                 const Quadrature& quad) {
  const auto phi = phi_from_b(spec);
  if (!phi.radial) throw std::invalid_argument("P_k quadrature needs a radial profile");
  const double inf = std::numeric_limits<double>::infinity();
  const double mass_part = quad([&](double m) { return std::pow(m, k * spec.theta) * F.F(t, m); }, 0.0, inf);
  const double mom_part = 4.0 * std::numbers::pi * quad(
      [&](double r) { return std::pow(r, k + 2.0) * phi(Vec3(r, 0.0, 0.0)); }, 0.0, inf);
  return mass_part * mom_part;
}

PkScaling pk_scaling_check(const MassSolution& F, const LiftSpec& spec, double k,
                           const std::vector<double>& t_grid, const Quadrature& quad) {
  if (k < 0.0) throw std::invalid_argument("P_k needs k >= 0");
  if (!(F.lambda < 1.0)) throw std::invalid_argument("scaling law needs lambda < 1");
  if (t_grid.empty() || !(t_grid.front() > 0.0))
    throw std::invalid_argument("P_k grid needs positive times");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("P_k grid must increase");
  const double t_hi = t_grid.back(), t_lo = t_hi / 10.0;
  if (t_grid.front() > t_lo) throw std::invalid_argument("P_k grid must span a full decade");

  PkScaling out;
  out.expected = 0.0 - (1.0 - k * spec.theta) / (1.0 - F.lambda);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double t : t_grid) {
    const double P = pk_moment(F, spec, k, t, quad);
    out.t.push_back(t);
    out.P.push_back(P);
    if (t < t_lo) continue;
    const double x = std::log(t), y = std::log(P);
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++n;
  }
  if (n < 2) throw std::invalid_argument("last decade holds fewer than two grid points");
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

}  // namespace agglab
