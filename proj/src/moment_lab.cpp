#include "agglab/moment_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace agglab {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double abs_pow(double r, double alpha) {
  if (alpha == 0.0) return 1.0;
  if (alpha == 1.0) return r;
  if (alpha == 2.0) return r * r;
  return std::pow(r, alpha);
}

}  // namespace

double sphere_constant(int d) {
  if (d < 1 || d > 3) throw std::invalid_argument("sphere constant needs d in {1, 2, 3}");
  return 1.0 / d;
}

double moment_drift(const KernelSpec& k, const ParticleSystem& sys, double alpha) {
  const auto& ps = sys.particles();
  double sum = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double ri = abs_pow(ps[i].impulsion().norm(), alpha);
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const double rj = abs_pow(ps[j].impulsion().norm(), alpha);
      const double rij = abs_pow((ps[i].impulsion() + ps[j].impulsion()).norm(), alpha);
      sum += eval_kernel(k, ps[i], ps[j]) * (rij - ri - rj);
    }
  }
  const double n0 = static_cast<double>(sys.n0());
  return sum / (n0 * n0);
}

Gamma2State Gamma2State::from_moments(int d, Eigen::VectorXd values) {
  return Gamma2State{d, sphere_constant(d), std::move(values)};
}

double gamma2_recursion(const Eigen::VectorXd& M, int alpha) {
  if (alpha < 1 || alpha >= M.size())
    throw std::invalid_argument("recursion order out of range");
  double gain = 0.0, loss = 0.0;
  for (int b = 1; b <= alpha - 1; ++b) gain += binomial(2 * alpha, 2 * b) * M(b) * M(alpha + 1 - b);
  for (int b = 0; b <= alpha - 1; ++b)
    loss += binomial(2 * alpha, 2 * b + 1) * M(b + 1) * M(alpha - b);
  return gain - loss;
}

Eigen::VectorXd gamma2_rhs(const Gamma2State& s) {
  const int B = s.max_half_order();
  if (B < 1) throw std::invalid_argument("gamma = 2 hierarchy needs at least (M0, M2)");
  if (B > 2 && s.d != 1)
    throw std::invalid_argument("moments beyond M4 close only in dimension 1");
  const auto& M = s.values;
  Eigen::VectorXd out(M.size());
  out(0) = -M(1) * M(0);
  out(1) = -2.0 * s.k_d * M(1) * M(1);
  if (B >= 2) out(2) = (2.0 - 4.0 * s.k_d) * M(1) * M(2);
  for (int a = 3; a <= B; ++a) out(a) = gamma2_recursion(M, a);
  return out;
}

Eigen::VectorXd gamma2_closed_form(const Gamma2State& s0, double t) {
  const int B = s0.max_half_order();
  if (B < 1) throw std::invalid_argument("closed form needs at least (M0, M2)");
  const auto& M = s0.values;
  const double k = s0.k_d;
  const double s = 1.0 + 2.0 * k * M(1) * t;
  const int len = std::min<int>(B, s0.d == 1 ? 3 : 2) + 1;
  Eigen::VectorXd out(len);
  out(0) = M(0) * std::pow(s, -1.0 / (2.0 * k));
  out(1) = M(1) / s;
  if (len > 2) out(2) = M(2) * std::pow(s, 1.0 / k - 2.0);
  if (len > 3) {
    const double c = M(2) * M(2) / M(1);
    out(3) = (M(3) - c) * std::pow(s, 1.5) + c / s;
  }
  return out;
}

namespace {

void check_chain(const Eigen::VectorXd& M, double t) {
  for (Eigen::Index b = 1; b + 1 < M.size(); ++b) {
    const double lhs = M(b) * M(b), rhs = M(b - 1) * M(b + 1);
    if (lhs > rhs * (1.0 + 1e-10))
      throw std::domain_error("Cauchy-Schwarz chain broken at t = " + std::to_string(t) +
                              " for M_" + std::to_string(2 * b));
  }
}

Eigen::VectorXd rk4_step(Gamma2State& s, double h) {
  const Eigen::VectorXd y = s.values;
  const Eigen::VectorXd k1 = gamma2_rhs(s);
  s.values = y + 0.5 * h * k1;
  const Eigen::VectorXd k2 = gamma2_rhs(s);
  s.values = y + 0.5 * h * k2;
  const Eigen::VectorXd k3 = gamma2_rhs(s);
  s.values = y + h * k3;
  const Eigen::VectorXd k4 = gamma2_rhs(s);
  s.values = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return s.values;
}

// Integrates `steps` RK4 steps of size h, keeping every `stride`-th state.
std::vector<Eigen::VectorXd> integrate(Gamma2State s, double h, std::size_t steps,
                                       std::size_t stride, bool chain) {
  std::vector<Eigen::VectorXd> out{s.values};
  for (std::size_t n = 1; n <= steps; ++n) {
    rk4_step(s, h);
    if (chain) check_chain(s.values, static_cast<double>(n) * h);
    if (n % stride == 0) out.push_back(s.values);
  }
  return out;
}

}  // namespace

MomentSeries integrate_gamma2(const Gamma2State& state0, double t_end, double dt,
                              const Gamma2Options& opts) {
  if (!(t_end > 0.0) || !(dt > 0.0)) throw std::invalid_argument("need t_end > 0 and dt > 0");
  if (opts.record_stride == 0) throw std::invalid_argument("record stride must be positive");
  (void)gamma2_rhs(state0);  // validates the order/dimension combination
  for (Eigen::Index i = 0; i < state0.values.size(); ++i)
    if (!(state0.values(i) > 0.0)) throw std::invalid_argument("initial moments must be positive");
  if (opts.check_cauchy_schwarz) check_chain(state0.values, 0.0);

  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  if (steps == 0) throw std::invalid_argument("dt larger than t_end");
  const double h = t_end / static_cast<double>(steps);

  const auto coarse = integrate(state0, h, steps, opts.record_stride, opts.check_cauchy_schwarz);
  const auto fine =
      integrate(state0, 0.5 * h, 2 * steps, 2 * opts.record_stride, opts.check_cauchy_schwarz);

  for (std::size_t r = 0; r < coarse.size(); ++r) {
    for (Eigen::Index i = 0; i < coarse[r].size(); ++i) {
      const double a = coarse[r](i), b = fine[r](i);
      if (std::abs(a - b) > opts.rel_tol * std::abs(b) + std::numeric_limits<double>::min())
      {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "step doubling failed: dt = %g is too coarse (relative change %.3g at t = %g)",
                      h, std::abs(a - b) / std::abs(b), static_cast<double>(r * opts.record_stride) * h);
        throw std::runtime_error(msg);
      }
    }
  }

  MomentSeries series;
  series.provenance = Provenance::Ode;
  series.kernel = KernelSpec::impulsion_power(2.0);
  series.dim = state0.d;
  for (std::size_t r = 0; r < fine.size(); ++r)
    series.t.push_back(static_cast<double>(r * opts.record_stride) * h);
  series.t.back() = std::min(series.t.back(), t_end);
  for (Eigen::Index i = 0; i < state0.values.size(); ++i) {
    std::vector<double> col(fine.size());
    for (std::size_t r = 0; r < fine.size(); ++r) col[r] = fine[r](i);
    series.add_column({0.0, 2.0 * static_cast<double>(i)}, std::move(col));
  }
  return series;
}

namespace {

BoundRow upper_row(std::string claim, double t, double measured, double bound, double se,
                   double tol, double nsigma) {
  BoundRow r{std::move(claim), t, measured, bound, 0.0, true};
  r.slack = bound > 0.0 ? measured / bound : (measured > 0.0 ? INFINITY : 0.0);
  r.pass = measured <= bound * (1.0 + tol) + nsigma * se;
  return r;
}

BoundRow lower_row(std::string claim, double t, double measured, double bound, double se,
                   double tol, double nsigma) {
  BoundRow r{std::move(claim), t, measured, bound, 0.0, true};
  r.slack = measured > 0.0 ? bound / measured : (bound > 0.0 ? INFINITY : 0.0);
  r.pass = measured >= bound * (1.0 - tol) - nsigma * se;
  return r;
}

}  // namespace

BoundReport check_hs_bound(const MomentSeries& series, double A_inv, double tol, double nsigma) {
  const auto& mean = series.column(-1.0 / 3.0, 1.0);
  const auto& se = series.error_column(-1.0 / 3.0, 1.0);
  if (!(A_inv > 0.0)) throw std::invalid_argument("M_{-1/3,1}(0) must be positive");
  const double A = 1.0 / A_inv;
  BoundReport rep{"hs_decay_M_-1/3_1", tol, nsigma, {}};
  for (std::size_t k = 0; k < series.t.size(); ++k) {
    const double t = series.t[k];
    rep.rows.push_back(upper_row("M_{-1/3,1}(t) <= 1/(A + t/4)", t, mean[k], 1.0 / (A + t / 4.0),
                                 se[k], tol, nsigma));
  }
  return rep;
}

BoundReport check_gamma1_brackets(const MomentSeries& series, const Gamma1Initial& in, double tol,
                                  double nsigma) {
  if (!series.kernel || !(*series.kernel == KernelSpec::impulsion_power(1.0)) || series.dim != 1)
    throw std::invalid_argument("gamma = 1 brackets apply only to a = |p - p'| in d = 1 data");
  BoundReport rep{"gamma1_brackets", tol, nsigma, {}};
  auto se_of = [&](double beta, std::size_t k) {
    return series.error ? series.error_column(0.0, beta)[k] : 0.0;
  };

  for (std::size_t k = 0; k < series.t.size(); ++k) {
    const double t = series.t[k];
    if (series.has(0.0, 1.0)) {
      const double m = series.column(0.0, 1.0)[k], se = se_of(1.0, k);
      rep.rows.push_back(lower_row("M1 >= 1/(M1(0)^-1 + t)", t, m, 1.0 / (1.0 / in.M1 + t), se, tol, nsigma));
      rep.rows.push_back(upper_row("M1 <= 1/(M1(0)^-1 + t/2)", t, m, 1.0 / (1.0 / in.M1 + 0.5 * t), se, tol, nsigma));
    }
    if (series.has(0.0, 0.0)) {
      const double m = series.column(0.0, 0.0)[k], se = se_of(0.0, k);
      const double lo1 = in.M0 / std::pow(1.0 + in.M1 * t / 2.0, 2.0);
      const double lo2 =
          std::pow(std::pow(in.M0, -2.0 / 3.0) + 1.5 * std::cbrt(in.M3) * t, -1.5);
      rep.rows.push_back(lower_row("M0 >= max(two lower bounds)", t, m, std::max(lo1, lo2), se, tol, nsigma));
      rep.rows.push_back(upper_row("M0 <= M0(0)/(1 + M1(0) t)^(1/2)", t, m,
                                   in.M0 / std::sqrt(1.0 + in.M1 * t), se, tol, nsigma));
    }
    for (auto [beta, m0] : {std::pair{2.0, in.M2}, std::pair{3.0, in.M3}}) {
      if (!series.has(0.0, beta)) continue;
      const std::string name = beta == 2.0 ? "M2" : "M3";
      const double m = series.column(0.0, beta)[k], se = se_of(beta, k);
      rep.rows.push_back(lower_row(name + " >= " + name + "(0)/(1 + M1(0) t/2)^2", t, m,
                                   m0 / std::pow(1.0 + in.M1 * t / 2.0, 2.0), se, tol, nsigma));
      rep.rows.push_back(upper_row(name + " <= " + name + "(0)", t, m, m0, se, tol, nsigma));
      if (k > 0) {
        const double prev = series.column(0.0, beta)[k - 1];
        const double se_pair = std::hypot(se, se_of(beta, k - 1));
        rep.rows.push_back(upper_row(name + " non-increasing", t, m, prev, se_pair, tol, nsigma));
      }
    }
  }
  return rep;
}

BoundReport check_gamma_bracket_scaling(const MomentSeries& series, MomentKey key,
                                        double ratio_limit) {
  const auto& col = series.column(key.alpha, key.beta);
  if (series.t.empty() || series.t.front() != 0.0)
    throw std::invalid_argument("bracket scaling needs the series to start at t = 0");
  if (col.front() == 0.0) throw std::domain_error("M_gamma(0) = 0");
  BoundReport rep{"gamma_bracket_scaling", ratio_limit, 0.0, {}};
  double rmin = INFINITY, rmax = -INFINITY;
  for (std::size_t k = 1; k < series.t.size(); ++k) {
    if (col[k] == 0.0) throw std::domain_error("M_gamma(t) = 0 at t = " + std::to_string(series.t[k]));
    const double r = (1.0 / col[k] - 1.0 / col.front()) / series.t[k];
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
    rep.rows.push_back({"r(t) > 0", series.t[k], r, 0.0, 0.0, r > 0.0});
  }
  if (series.t.size() > 1) {
    const double ratio = rmax / rmin;
    rep.rows.push_back({"max r / min r <= limit", series.t.back(), ratio, ratio_limit,
                        ratio / ratio_limit, rmin > 0.0 && ratio <= ratio_limit});
  }
  return rep;
}

}  // namespace agglab
