#include <doctest.h>

#include <cmath>
#include <numeric>

#include "agglab/particle_sim.hpp"

using namespace agglab;

namespace {

SimConfig small_config(KernelSpec k, std::size_t n0 = 200, int d = 1) {
  SimConfig cfg;
  cfg.kernel = k;
  cfg.n0 = n0;
  cfg.d = d;
  cfg.t_grid = {0.0, 0.5, 1.0, 3.0};
  cfg.ensemble = 6;
  cfg.seed = 42;
  return cfg;
}

Impulsion total_impulsion(const ParticleSystem& s) {
  Impulsion p = Impulsion::Zero(s.dim());
  for (const auto& y : s.particles()) p += y.impulsion();
  return p;
}

}  // namespace

TEST_CASE("forced initial data") {
  SimConfig cfg = small_config(KernelSpec::constant(), 2);
  cfg.init.mass = Monodisperse{1.0};
  cfg.init.momentum = SymmetrizedSamples{{{1.0}}};
  const auto sys = init_system(cfg, 0);
  REQUIRE(sys.size() == 2);
  CHECK(sys.particles()[0] == make_particle(1, {1}));
  CHECK(sys.particles()[1] == make_particle(1, {-1}));
}

TEST_CASE("symmetrized gaussian data sum to zero impulsion exactly") {
  SimConfig cfg = small_config(KernelSpec::constant(), 10000, 3);
  const auto sys = init_system(cfg, 3);
  CHECK(sys.size() == 10000);
  CHECK(total_impulsion(sys).isZero(0.0));
}

TEST_CASE("streams are deterministic and distinct") {
  const SimConfig cfg = small_config(KernelSpec::impulsion_power(1.0));
  CHECK(init_system(cfg, 5) == init_system(cfg, 5));
  CHECK_FALSE(init_system(cfg, 5) == init_system(cfg, 6));
  auto a = init_system(cfg, 1), b = init_system(cfg, 1);
  run_to(a, 2.0);
  run_to(b, 2.0);
  CHECK(a == b);
}

TEST_CASE("config validation") {
  SimConfig cfg = small_config(KernelSpec::constant());
  cfg.n0 = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config(KernelSpec::constant(), 7);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.init.symmetrize = false;
  CHECK_NOTHROW(cfg.validate());
  cfg.t_grid = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config(KernelSpec::constant());
  cfg.ensemble = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("a single particle does not move") {
  ParticleSystem sys(KernelSpec::constant(), {make_particle(2, {1})}, 4, Engine(1));
  const auto before = sys.particles();
  run_to(sys, 100.0);
  CHECK(sys.particles() == before);
  CHECK(sys.time() == 100.0);
}

TEST_CASE("Manev kernel cannot be simulated") {
  ParticleSystem sys(KernelSpec::manev(), {make_particle(1, {1}), make_particle(1, {-1})}, 2, Engine(1));
  CHECK_THROWS_AS(run_to(sys, 1.0), std::domain_error);
  SimConfig cfg = small_config(KernelSpec::manev());
  CHECK_THROWS(ensemble_moments(cfg, {{0, 0}}));
}

TEST_CASE("per-event conservation and dissipation") {
  for (const auto& k : {KernelSpec::constant(), KernelSpec::impulsion_power(1.0),
                        KernelSpec::impulsion_power(2.0), KernelSpec::hard_sphere()}) {
    SimConfig cfg = small_config(k, 400, 2);
    cfg.init.mass = Monodisperse{1.0};
    cfg.init.momentum = SymmetrizedSamples{{{0.5, -1.0}, {2.0, 0.25}, {-0.75, 1.5}}};
    auto sys = init_system(cfg, 0);
    const double mass0 = sys.size();
    std::size_t events = 0;
    double ke = 0.0;
    for (const auto& y : sys.particles()) ke += y.kinetic_energy();
    bool ok = true;
    std::size_t last = sys.size();
    sys.advance_to(50.0, [&](const CoalescenceEvent& e, const ParticleSystem& s) {
      ++events;
      double m = 0.0, en = 0.0;
      for (const auto& y : s.particles()) m += y.mass(), en += y.kinetic_energy();
      ok = ok && m == mass0 && total_impulsion(s).isZero(0.0) && s.size() + 1 == last &&
           en <= ke * (1 + 1e-12) && e.merged == coalesce(e.first, e.second);
      last = s.size();
      ke = en;
    });
    CHECK(events > 100);
    CHECK(ok);
  }
}

TEST_CASE("empirical moments") {
  const std::vector<ParticleState> two{make_particle(1, {2}), make_particle(3, {-1})};
  CHECK(empirical_moment(two, 2, 1.0, 0.0) == 2.0);
  CHECK(empirical_moment(two, 4, 0.0, 0.0) == 0.5);
  const std::vector<ParticleState> one{make_particle(8, {0, 0, 6})};
  CHECK(empirical_moment(one, 1, -1.0 / 3.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
  const std::vector<ParticleState> rest{make_particle(1, {0})};
  CHECK_THROWS_AS(empirical_moment(rest, 1, 0.0, -1.0), std::domain_error);
  CHECK(empirical_moment(rest, 1, 0.0, 0.5) == 0.0);
}

TEST_CASE("ensemble output is independent of the thread count") {
  SimConfig cfg = small_config(KernelSpec::impulsion_power(1.0), 300);
  cfg.ensemble = 7;
  const std::vector<MomentKey> keys{{0, 0}, {1, 0}, {0, 2}, {0.5, 1}};
  const auto a = ensemble_moments(cfg, keys, 1);
  const auto b = ensemble_moments(cfg, keys, 3);
  const auto c = ensemble_moments(cfg, keys, 16);
  CHECK(a.values == b.values);
  CHECK(a.values == c.values);
  CHECK(*a.error == *c.error);
  CHECK(a.n_runs == 7);
  for (double v : a.column(1.0, 0.0)) CHECK(std::abs(v - a.column(1.0, 0.0).front()) <= 1e-12 * v);
}

TEST_CASE("constant kernel conserves M_{0,2} for even data in the mean") {
  SimConfig cfg = small_config(KernelSpec::constant(), 2000);
  cfg.t_grid = {0.0, 2.0, 8.0};
  cfg.ensemble = 16;
  const auto s = ensemble_moments(cfg, {{0, 2}});
  const auto& m = s.column(0, 2);
  const auto& se = s.error_column(0, 2);
  // finite-n0 correction e^{-t/n0} is far below the noise here
  for (std::size_t k = 1; k < m.size(); ++k) CHECK(std::abs(m[k] - m[0]) <= 3.0 * std::hypot(se[k], se[0]));
}
