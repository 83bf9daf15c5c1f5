#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "agglab/mass_selfsim.hpp"

using namespace agglab;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

double radial_integral(const std::function<double(const Vec3&)>& f) {
  return 4 * std::numbers::pi * Quadrature{}([&](double r) { return r * r * f(Vec3(r, 0, 0)); }, 0, kInf);
}

std::vector<Vec3> eta_grid() {
  std::vector<Vec3> g;
  for (int a = -2; a <= 2; ++a)
    for (int b = -1; b <= 2; ++b) g.emplace_back(0.5 * a, 0.75 * b, 0.3 * (a + b));
  return g;
}

std::vector<Collocation> points() {
  std::vector<Collocation> c;
  for (int i = 0; i < 20; ++i) c.push_back({0.1 + 0.4 * i, Vec3(0.2 * i - 1.0, 0.5, -0.1 * i)});
  return c;
}

}  // namespace

TEST_CASE("momentum profile of the quadratic symbol") {
  const auto spec = LiftSpec::quadratic();
  const auto phi = phi_from_b(spec);
  CHECK(phi.certified);
  CHECK(phi(Vec3::Zero()) == doctest::Approx(std::pow(4 * std::numbers::pi, -1.5)).epsilon(1e-15));
  CHECK(radial_integral(phi.eval) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(radial_integral(phi_from_b(LiftSpec::quadratic(2.0)).eval) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(homogeneity_check(spec, eta_grid()) < 1e-10);

  LiftSpec bad = LiftSpec::quadratic();
  bad.theta = 0.25;
  CHECK_THROWS_AS(phi_from_b(bad), std::invalid_argument);
}

TEST_CASE("custom symbols stay uncertified unless vouched for") {
  LiftSpec spec;
  spec.symbol = LiftSpec::Symbol::Custom;
  spec.theta = 1.0 / 3.0;
  spec.custom_b = [](const Vec3& e) { return std::pow(e.norm(), 3.0); };
  spec.custom_phi = [](const Vec3&) { return 0.0; };
  CHECK_FALSE(phi_from_b(spec).certified);
  CHECK_FALSE(phi_from_b(spec).radial);
  CHECK(homogeneity_check(spec, eta_grid()) < 1e-10);
  spec.certified = true;
  CHECK(phi_from_b(spec).certified);
  CHECK_THROWS_AS(pk_moment(constant_kernel_solution(), spec, 1.0, 1.0), std::invalid_argument);
  spec.custom_phi = nullptr;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("factorization identity") {
  const auto spec = LiftSpec::quadratic();
  CHECK(factorization_check(spec, 2.0, 0.7, eta_grid()) < 1e-12);
  CHECK(factorization_check(spec, 2.0, 1e-300, eta_grid()) < 1e-12);
  const double huge = factorization_check(spec, 1e308, 1e307, {Vec3(3, 4, 5)});
  CHECK(huge == 0.0);
  CHECK_THROWS_AS(factorization_check(spec, 1.0, 1.0, eta_grid()), std::invalid_argument);
}

TEST_CASE("constant-kernel mass solution") {
  const Quadrature q;
  for (double t : {0.0, 1.0, 4.0, 20.0}) {
    const double N = q([&](double m) { return smoluchowski_constant_exact(t, m); }, 0, kInf);
    const double M = q([&](double m) { return m * smoluchowski_constant_exact(t, m); }, 0, kInf);
    CHECK(N == doctest::Approx(1.0 / (1.0 + t / 2)).epsilon(1e-10));
    CHECK(M == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(smoluchowski_constant_exact(0.0, 1.3) == std::exp(-1.3));
  const auto F = constant_kernel_solution();
  for (double m : {0.2, 1.0, 3.0})
    CHECK(std::abs(mass_equation_residual(F, 1.0, m)) < 1e-8);
}

TEST_CASE("lift") {
  const auto spec = LiftSpec::quadratic();
  const auto F = constant_kernel_solution();
  CHECK(lift_solution(F, spec, 0.0, 1.0, Vec3::Zero()) ==
        doctest::Approx(std::exp(-1.0) * std::pow(4 * std::numbers::pi, -1.5)).epsilon(1e-15));
  CHECK_THROWS_AS(lift_solution(F, spec, 0.0, 0.0, Vec3::Zero()), std::domain_error);
  for (double m : {0.3, 1.0, 4.0}) {
    const double marginal = radial_integral([&](const Vec3& p) { return lift_solution(F, spec, 2.0, m, p); });
    CHECK(marginal == doctest::Approx(F.F(2.0, m)).epsilon(1e-8));
  }
  const auto phi = phi_from_b(spec);
  const Vec3 p(0.3, -0.2, 0.4);
  const double m = 2.0;
  CHECK(lift_solution(F, spec, 1.0, m, 2 * p) / lift_solution(F, spec, 1.0, m, p) ==
        doctest::Approx(phi(2 * p / std::sqrt(m)) / phi(p / std::sqrt(m))).epsilon(1e-12));
}

TEST_CASE("lifted residual") {
  const auto spec = LiftSpec::quadratic();
  const auto F = constant_kernel_solution();
  const double r0 = residual_check(F, spec, 0.0, points());
  const double r5 = residual_check(F, spec, 5.0, points());
  CHECK(r0 < 1e-6);
  CHECK(r5 < 1e-6);

  MassSolution perturbed = F;
  perturbed.F = [](double t, double m) { return 1.01 * smoluchowski_constant_exact(t, m); };
  CHECK(residual_check(perturbed, spec, 0.0, points()) > 1e3 * std::max(r0, 1e-12));

  MassSolution bare = F;
  bare.kernel = nullptr;
  CHECK_THROWS_AS(residual_check(bare, spec, 0.0, points()), std::invalid_argument);
}

TEST_CASE("self-similar lift matches the direct lift") {
  const auto spec = LiftSpec::quadratic();
  const auto F = constant_kernel_solution();
  SelfSimilarMass s{[](double t) { return std::pow(1 + t / 2, -2.0); },
                    [](double t) { return 1 / (1 + t / 2); }, [](double M) { return std::exp(-M); }};
  for (double t : {0.0, 3.0, 40.0})
    for (const auto& c : points()) {
      const double direct = lift_solution(F, spec, t, c.m, c.p);
      REQUIRE(std::abs(selfsim_lift(s, spec, t, c.m, c.p) - direct) <= 1e-10 * direct);
    }
}

TEST_CASE("moment scaling") {
  const auto spec = LiftSpec::quadratic();
  const auto F = constant_kernel_solution();
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(std::pow(10.0, 1 + i / 4.0));
  for (auto [k, want] : {std::pair{0.0, -1.0}, std::pair{1.0, -0.5}, std::pair{2.0, 0.0}}) {
    const auto r = pk_scaling_check(F, spec, k, grid);
    CHECK(r.expected == want);
    CHECK(std::abs(r.slope - want) < 0.05);
  }
  double prev = 0.0;
  for (double t : grid) {
    const double ratio = pk_moment(F, spec, 1.0, t) / pk_moment(F, spec, 0.0, t);
    CHECK(ratio > prev);
    prev = ratio;
  }
  CHECK_THROWS_AS(pk_scaling_check(F, spec, -1.0, grid), std::invalid_argument);
  CHECK_THROWS_AS(pk_scaling_check(F, spec, 1.0, {50.0, 100.0}), std::invalid_argument);
}
