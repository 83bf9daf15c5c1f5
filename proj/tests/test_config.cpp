#include <doctest.h>

#include <random>

#include "agglab/config.hpp"
#include "agglab/run.hpp"

using namespace agglab;

namespace {

std::string errors_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool mentions(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

RunConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 5.0);
  std::uniform_int_distribution<int> pick(0, 4), small(1, 3);
  auto grid = [&](double start) {
    std::vector<double> g{start};
    for (int i = 0, n = small(rng); i < n; ++i) g.push_back(g.back() + u(rng));
    return g;
  };
  RunConfig cfg;
  switch (pick(rng)) {
    case 0: {
      SimulateParams p;
      const int k = pick(rng);
      p.sim.kernel = k == 0   ? KernelSpec::constant()
                     : k == 1 ? KernelSpec::impulsion_power(std::uniform_real_distribution<double>(0, 2)(rng))
                     : k == 2 ? KernelSpec::hard_sphere()
                     : k == 3 ? KernelSpec::mass_only(MassForm::Product, u(rng))
                              : KernelSpec::mass_only(MassForm::Sum, u(rng));
      p.sim.d = small(rng);
      p.sim.n0 = 2 * static_cast<std::size_t>(1 + pick(rng) * 37);
      p.sim.t_grid = grid(0.0);
      p.sim.ensemble = static_cast<std::size_t>(small(rng));
      p.sim.seed = rng();
      if (pick(rng) % 2) p.sim.init.mass = Monodisperse{u(rng)};
      if (pick(rng) % 2) {
        SymmetrizedSamples s;
        for (int i = 0; i < small(rng); ++i) {
          std::vector<double> v;
          for (int c = 0; c < p.sim.d; ++c) v.push_back(u(rng) - 2.5);
          s.samples.push_back(v);
        }
        p.sim.init.momentum = s;
      } else {
        p.sim.init.momentum = GaussianIsotropic{u(rng)};
      }
      p.moments = {{u(rng), 0}, {-1.0 / 3.0, 1}};
      cfg.params = p;
      break;
    }
    case 1: {
      OdeParams p;
      p.d = 1;
      if (pick(rng) % 2) p.k_d = u(rng);
      p.moments = {1.0, u(rng), 3.0 * u(rng)};
      p.t_end = u(rng);
      p.dt = 1e-3 * u(rng);
      p.record_stride = static_cast<std::size_t>(small(rng));
      p.rel_tol = 1e-7;
      cfg.params = p;
      break;
    }
    case 2: {
      ExactParams p;
      p.number = u(rng);
      p.rate = u(rng);
      p.sigma = u(rng);
      p.t = grid(u(rng));
      p.h = 1e-3 * u(rng);
      cfg.params = p;
      break;
    }
    case 3: {
      LiftParams p;
      p.scale = u(rng);
      p.k = {0.0, u(rng)};
      cfg.params = p;
      break;
    }
    default: {
      VerifyParams p;
      p.criteria = {"A1", "A7"};
      p.seed = rng();
      if (pick(rng) % 2) p.inject_k1 = u(rng);
      cfg.params = p;
    }
  }
  return cfg;
}

}  // namespace

TEST_CASE("minimal simulate config takes the defaults") {
  const auto cfg = parse_config(R"({"command": "simulate", "simulate": {"kernel": {"type": "constant"}, "t_grid": [0, 1]}})");
  REQUIRE(cfg.command() == Command::Simulate);
  const auto& p = std::get<SimulateParams>(cfg.params);
  CHECK(p.sim.kernel == KernelSpec::constant());
  CHECK(p.sim.n0 == SimConfig{}.n0);
  CHECK(p.sim.init == InitialCondition{});
  CHECK(p.moments == SimulateParams{}.moments);
  CHECK(parse_config(R"({"command": "lift"})") == RunConfig{LiftParams{}});
}

TEST_CASE("config rejections") {
  const auto gamma3 = errors_of(
      R"({"command": "simulate", "simulate": {"kernel": {"type": "impulsion_power", "gamma": 3}, "t_grid": [0]}})");
  CHECK(mentions(gamma3, "gamma"));
  CHECK(mentions(errors_of(R"({"command": "lift", "lift": {"theta": 0.5, "theta": 0.5}})"), "duplicate key"));
  CHECK(mentions(errors_of(R"({"command": "lift", "lift": {"thetta": 0.5}})"), "thetta"));
  CHECK(mentions(errors_of(R"({"command": "lift", "extra": 1})"), "extra"));
  const auto n0 = errors_of(
      R"({"command": "simulate", "simulate": {"kernel": {"type": "constant"}, "t_grid": [0], "n0": 1}})");
  CHECK(mentions(n0, "n0"));
  CHECK(mentions(errors_of(R"({"command": "simulate", "simulate": {"kernel": {"type": "manev"}, "t_grid": [0]}})"),
                 "manev"));
  CHECK(mentions(errors_of(R"({"command": "dance"})"), "dance"));
  CHECK(mentions(errors_of(R"({"command": "lift",)"), "syntax"));
  CHECK(mentions(errors_of(R"({"command": "simulate"})"), "simulate"));
  CHECK(mentions(errors_of(R"({"command": "verify", "verify": {"criteria": ["A99"]}})"), "A99"));

  // every problem is reported, not just the first
  try {
    parse_config(R"({"command": "exact", "exact": {"rate": "fast", "bogus": 1, "t": 3}})");
    FAIL("accepted a broken config");
  } catch (const ConfigError& e) {
    CHECK(e.errors().size() >= 3);
  }
}

TEST_CASE("parse(emit(cfg)) == cfg") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    const auto cfg = random_config(rng);
    const auto text = emit_config(cfg);
    REQUIRE_MESSAGE(parse_config(text) == cfg, text);
    CHECK(emit_config(parse_config(text)) == text);
  }
}

TEST_CASE("moment tables") {
  const auto cfg = parse_config(R"({"command": "simulate", "simulate": {
    "kernel": {"type": "impulsion_power", "gamma": 1}, "n0": 200, "t_grid": [0, 1, 2],
    "ensemble": 5, "seed": 9, "moments": [[0, 0], [0, 1]]}})");
  const auto a = run(cfg, 1);
  const auto csv = to_csv(a);
  CHECK(csv.substr(0, csv.find('\n')) == "t,alpha,beta,value,stderr,n_runs");
  CHECK(a.rows.size() == 6);
  CHECK(a.metadata["seed"] == 9);
  CHECK(a.metadata["config_hash"] == config_hash(cfg));
  CHECK(a.metadata["code_version"] == code_version());
  CHECK(a.metadata.contains("generator"));
  CHECK(a.metadata.contains("tolerances"));
  for (unsigned threads : {2u, 4u, 8u}) {
    const auto b = run(cfg, threads);
    CHECK(to_csv(b) == csv);
    CHECK(to_json(b) == to_json(a));
  }

  const auto ode = run(parse_config(R"({"command": "ode", "ode": {"moments": [1, 0.5, 0.75], "t_end": 1, "dt": 0.01, "record_stride": 10}})"));
  const auto ocsv = to_csv(ode);
  CHECK(ocsv.substr(0, ocsv.find('\n')) == "t,alpha,beta,value,stderr,n_runs");
  CHECK(ocsv.find(",,0\n") != std::string::npos);
  CHECK(ode.status == 0);
}

TEST_CASE("number formatting round-trips") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(-2.5) == "-2.5");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    REQUIRE(std::stod(format_number(x)) == x);
  }
}
