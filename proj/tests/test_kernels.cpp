#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "agglab/kernels.hpp"
#include "agglab/particle.hpp"
#include "agglab/random.hpp"

using namespace agglab;

namespace {

ParticleState random_particle(Engine& rng, int d) {
  std::exponential_distribution<double> mass(1.0);
  std::normal_distribution<double> normal;
  Impulsion p(d);
  for (int i = 0; i < d; ++i) p(i) = 2.0 * normal(rng);
  return ParticleState(mass(rng) + 1e-3, p);
}

std::vector<KernelSpec> simulatable() {
  return {KernelSpec::constant(),          KernelSpec::impulsion_power(0.0),
          KernelSpec::impulsion_power(0.7), KernelSpec::impulsion_power(1.0),
          KernelSpec::impulsion_power(2.0), KernelSpec::hard_sphere(),
          KernelSpec::mass_only(MassForm::Sum, 1e6)};
}

}  // namespace

TEST_CASE("particle state rejects bad input") {
  CHECK_THROWS_AS(make_particle(0.0, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_particle(-1.0, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_particle(1.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_particle(1.0, {1, 2, 3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(make_particle(1.0, {NAN}), std::invalid_argument);
  const auto y = make_particle(2.0, {4.0, 0.0});
  CHECK(y.velocity()(0) == 2.0);
  CHECK(y.kinetic_energy() == 4.0);
}

TEST_CASE("kernel values") {
  const auto a = make_particle(1.0, {1, 0, 0});
  const auto b = make_particle(1.0, {-1, 0, 0});
  CHECK(eval_kernel(KernelSpec::constant(), a, b) == 1.0);
  CHECK(eval_kernel(KernelSpec::hard_sphere(), a, b) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(eval_kernel(KernelSpec::impulsion_power(2.0), make_particle(1, {1}), make_particle(3, {1})) == 0.0);
  CHECK(eval_kernel(KernelSpec::impulsion_power(1.0), a, b) == 2.0);
  CHECK(eval_kernel(KernelSpec::manev(), make_particle(1, {1}), make_particle(1, {-1})) == 0.5);
  CHECK(eval_kernel(KernelSpec::mass_only(MassForm::Product, 10), make_particle(2, {0}),
                    make_particle(3, {0})) == 6.0);
}

TEST_CASE("kernel errors") {
  CHECK_THROWS_AS(KernelSpec::impulsion_power(2.5), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec::impulsion_power(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(eval_kernel(KernelSpec::constant(), make_particle(1, {1}), make_particle(1, {1, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(eval_kernel(KernelSpec::manev(), make_particle(1, {1}), make_particle(2, {2})),
                  std::domain_error);
  CHECK_THROWS_AS(majorant(KernelSpec::manev(), SystemStats{1, 1, 1, 1}), std::domain_error);
}

TEST_CASE("coalescence conserves mass and impulsion") {
  const auto y = coalesce(make_particle(1, {2}), make_particle(3, {-1}));
  CHECK(y == make_particle(4, {1}));
  CHECK(coalesce(make_particle(0.75, {0.25, -3}), make_particle(0.75, {-0.25, 3})) ==
        make_particle(1.5, {0, 0}));
  CHECK(coalesce(make_particle(0.5, {0, 1, 0}), make_particle(0.5, {0, 1, 0})) ==
        make_particle(1, {0, 2, 0}));
}

TEST_CASE("kinetic energy loss") {
  CHECK(kinetic_energy_loss(make_particle(1, {1}), make_particle(1, {-1})) == 1.0);
  CHECK(kinetic_energy_loss(make_particle(1, {3}), make_particle(2, {0})) == doctest::Approx(3.0));
  CHECK(kinetic_energy_loss(make_particle(2, {2, 4}), make_particle(1, {1, 2})) == 0.0);
}

TEST_CASE("majorant values") {
  CHECK(majorant(KernelSpec::constant(), {}) == 1.0);
  CHECK(majorant(KernelSpec::impulsion_power(1.0), SystemStats{3, 0, 0, 0}) == 6.0);
  CHECK(majorant(KernelSpec::hard_sphere(), SystemStats{0, 1, 2, 0}) == 16.0);
  CHECK(majorant(KernelSpec::mass_only(MassForm::Sum, 7.0), {}) == 7.0);
}

TEST_CASE("symmetry, parity, energy identity, contraction over 1e4 random pairs") {
  Engine rng(99);
  for (int d = 1; d <= 3; ++d) {
    for (int n = 0; n < 10000; ++n) {
      const auto a = random_particle(rng, d), b = random_particle(rng, d);
      for (const auto& k : simulatable()) REQUIRE(eval_kernel(k, a, b) == eval_kernel(k, b, a));
      REQUIRE(eval_kernel(KernelSpec::manev(), a, b) == eval_kernel(KernelSpec::manev(), b, a));

      const ParticleState na(a.mass(), -a.impulsion()), nb(b.mass(), -b.impulsion());
      for (double g : {0.0, 0.5, 1.0, 1.5, 2.0})
        REQUIRE(eval_kernel(KernelSpec::impulsion_power(g), na, nb) ==
                eval_kernel(KernelSpec::impulsion_power(g), a, b));

      const auto c = coalesce(a, b);
      const double scale = a.kinetic_energy() + b.kinetic_energy();
      const double direct = scale - c.kinetic_energy();
      REQUIRE(std::abs(kinetic_energy_loss(a, b) - direct) <= 1e-12 * scale);
      REQUIRE(kinetic_energy_loss(a, b) >= 0.0);
      REQUIRE(c.speed() <= std::max(a.speed(), b.speed()) * (1 + 4e-16));
    }
  }
}

TEST_CASE("majorant dominates every pair of a random system") {
  Engine rng(7);
  for (int d = 1; d <= 3; ++d) {
    std::vector<ParticleState> ps;
    for (int i = 0; i < 200; ++i) ps.push_back(random_particle(rng, d));
    const auto stats = summarize(ps);
    std::uniform_int_distribution<std::size_t> pick(0, ps.size() - 1);
    for (const auto& k : simulatable()) {
      const double L = majorant(k, stats);
      for (int n = 0; n < 10000; ++n) {
        const auto i = pick(rng), j = pick(rng);
        REQUIRE(eval_kernel(k, ps[i], ps[j]) <= L);
      }
    }
  }
}

TEST_CASE("kernel spec tags and equality") {
  CHECK(KernelSpec::impulsion_power(1.0) == KernelSpec::impulsion_power(1.0));
  CHECK_FALSE(KernelSpec::impulsion_power(1.0) == KernelSpec::impulsion_power(2.0));
  CHECK(KernelSpec::hard_sphere().tag() == "hard_sphere");
  CHECK(KernelSpec::mass_only(MassForm::Product, 1).mass_homogeneity() == 2.0);
  CHECK(mass_form_from_string(to_string(MassForm::Sum)) == MassForm::Sum);
  CHECK_THROWS(mass_form_from_string("cubic"));
}
