#include <doctest.h>

#include <cmath>
#include <random>

#include "agglab/moment_lab.hpp"

using namespace agglab;

namespace {

MomentSeries synthetic(std::vector<double> t, std::vector<std::pair<MomentKey, std::vector<double>>> cols,
                       std::optional<KernelSpec> k = std::nullopt) {
  MomentSeries s;
  s.t = std::move(t);
  s.kernel = k;
  s.provenance = Provenance::MonteCarlo;
  for (auto& [key, v] : cols) {
    std::vector<double> zero(v.size(), 0.0);
    s.add_column(key, std::move(v), zero);
  }
  return s;
}

Gamma2State state(int d, std::vector<double> v) {
  return Gamma2State::from_moments(d, Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

}  // namespace

TEST_CASE("sphere constants") {
  CHECK(sphere_constant(1) == 1.0);
  CHECK(sphere_constant(2) == 0.5);
  CHECK(sphere_constant(3) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS(sphere_constant(4));

  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  const int N = 1000000;
  double s = 0, s2 = 0;
  for (int i = 0; i < N; ++i) {
    const double x = n(rng), y = n(rng), z = n(rng);
    const double c = x * x / (x * x + y * y + z * z);
    s += c, s2 += c * c;
  }
  const double mean = s / N, se = std::sqrt((s2 / N - mean * mean) / N);
  CHECK(std::abs(mean - sphere_constant(3)) < 3 * se);
}

TEST_CASE("gamma = 2 right-hand side") {
  const auto d0 = gamma2_rhs(state(1, {1, 1}));
  CHECK(d0(0) == -1.0);
  CHECK(d0(1) == -2.0);
  const auto d3 = gamma2_rhs(state(1, {1, 1, 1, 1}));
  CHECK(d3(3) == -2.0);
  CHECK(gamma2_rhs(state(1, {0, 0, 0, 0, 0})).isZero(0.0));
  CHECK(gamma2_rhs(state(3, {1, 1, 1}))(2) == doctest::Approx(2.0 - 4.0 / 3.0));
  CHECK_THROWS_AS(gamma2_rhs(state(2, {1, 1, 1, 1})), std::invalid_argument);
  CHECK_THROWS_AS(gamma2_rhs(state(1, {1})), std::invalid_argument);
}

TEST_CASE("moment drift against a hand sum") {
  const auto k = KernelSpec::impulsion_power(1.0);
  ParticleSystem two(k, {make_particle(1, {1}), make_particle(1, {-1})}, 2, Engine(0));
  // a = 2, bracket = 0 - 1 - 1, one unordered pair, 1/n0^2 = 1/4
  CHECK(moment_drift(k, two, 1.0) == -1.0);
  ParticleSystem one(k, {make_particle(1, {3})}, 1, Engine(0));
  CHECK(moment_drift(k, one, 2.0) == 0.0);

  ParticleSystem many(KernelSpec::constant(),
                      {make_particle(1, {0.3}), make_particle(2, {-1.2}), make_particle(1, {2.0}),
                       make_particle(0.5, {-0.1})},
                      4, Engine(0));
  CHECK(moment_drift(KernelSpec::constant(), many, 1.0) <= 0.0);
}

TEST_CASE("gamma = 2 integration matches the closed forms") {
  const auto s0 = state(1, {1.0, 0.5, 0.75, 1.875});
  const auto s = integrate_gamma2(s0, 5.0, 1e-3, {1e-8, 100, true});
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    const auto cf = gamma2_closed_form(s0, s.t[k]);
    CHECK(s.values[1][k] == doctest::Approx(1.0 / (2.0 + 2.0 * s.t[k])).epsilon(1e-8));
    for (int j = 0; j < 4; ++j) CHECK(s.values[static_cast<std::size_t>(j)][k] == doctest::Approx(cf(j)).epsilon(1e-8));
  }
  const auto s3 = state(3, {1.0, 1.5, 3.75});
  const auto r3 = integrate_gamma2(s3, 4.0, 1e-3, {1e-8, 500, true});
  for (std::size_t k = 0; k < r3.t.size(); ++k) {
    const auto cf = gamma2_closed_form(s3, r3.t[k]);
    for (int j = 0; j < 3; ++j) CHECK(r3.values[static_cast<std::size_t>(j)][k] == doctest::Approx(cf(j)).epsilon(1e-8));
  }
}

TEST_CASE("integration rejects bad input") {
  CHECK_THROWS_AS(integrate_gamma2(state(1, {1, 0.5}), 0.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(integrate_gamma2(state(1, {1, -0.5}), 1.0, 1e-3), std::invalid_argument);
  // M4^2 > M2 M6 at t = 0
  CHECK_THROWS_AS(integrate_gamma2(state(1, {1, 0.5, 2.0, 1.0}), 1.0, 1e-3), std::domain_error);
  CHECK_THROWS_AS(integrate_gamma2(state(1, {1, 0.5, 0.75, 1.875}), 1.0, 0.5, {1e-12, 1, true}),
                  std::runtime_error);
}

TEST_CASE("hard-sphere bound check") {
  const std::vector<double> t{0, 1, 2, 5};
  const double A = 2.0;
  std::vector<double> tight, doubled, zero(4, 0.0);
  for (double x : t) tight.push_back(1.0 / (A + x / 4)), doubled.push_back(2.0 / (A + x / 4));
  CHECK(check_hs_bound(synthetic(t, {{{-1.0 / 3.0, 1}, tight}}), 1 / A).passed());
  CHECK(check_hs_bound(synthetic(t, {{{-1.0 / 3.0, 1}, zero}}), 1 / A).passed());
  const auto bad = check_hs_bound(synthetic(t, {{{-1.0 / 3.0, 1}, doubled}}), 1 / A);
  CHECK_FALSE(bad.passed());
  for (const auto& r : bad.rows) {
    CHECK_FALSE(r.pass);
    CHECK(r.slack == doctest::Approx(2.0));
  }
}

TEST_CASE("gamma = 1 brackets") {
  const std::vector<double> t{0, 1, 2, 5, 10};
  const Gamma1Initial in{1.0, 1.0, 1.0, 1.0};
  std::vector<double> mid, flat(5, 1.0), rising;
  for (double x : t) mid.push_back(1.0 / (1.0 + 0.75 * x)), rising.push_back(1.0 + x);
  const auto k = KernelSpec::impulsion_power(1.0);
  CHECK(check_gamma1_brackets(synthetic(t, {{{0, 1}, mid}, {{0, 2}, flat}}, k), in).passed());
  const auto bad = check_gamma1_brackets(synthetic(t, {{{0, 2}, rising}}, k), in);
  CHECK_FALSE(bad.passed());
  CHECK(bad.first_failure()->claim == "M2 <= M2(0)");
  CHECK_THROWS_AS(check_gamma1_brackets(synthetic(t, {{{0, 1}, mid}}, KernelSpec::constant()), in),
                  std::invalid_argument);
}

TEST_CASE("bracket scaling") {
  const std::vector<double> t{0, 1, 2, 5, 10, 20};
  std::vector<double> exact, quad, m0;
  for (double x : t) {
    exact.push_back(1.0 / (2.0 + 0.3 * x));
    quad.push_back(1.0 / (2.0 + x * x));
    m0.push_back(1.0 / (1.0 + x / 2));
  }
  const auto ok = check_gamma_bracket_scaling(synthetic(t, {{{0, 1}, exact}}), {0, 1});
  CHECK(ok.passed());
  CHECK(ok.rows.back().measured == doctest::Approx(1.0));
  CHECK_FALSE(check_gamma_bracket_scaling(synthetic(t, {{{0, 1}, quad}}), {0, 1}).passed());
  const auto c = check_gamma_bracket_scaling(synthetic(t, {{{0, 0}, m0}}), {0, 0});
  CHECK(c.passed());
  for (std::size_t i = 0; i + 1 < c.rows.size(); ++i) CHECK(c.rows[i].measured == doctest::Approx(0.5));
}
