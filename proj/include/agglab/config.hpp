#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "agglab/moment_series.hpp"
#include "agglab/particle_sim.hpp"

namespace agglab {

enum class Command { Simulate, Ode, Exact, Lift, Verify };

std::string to_string(Command c);
std::optional<Command> command_from_string(std::string_view s);

struct SimulateParams {
  SimConfig sim;
  std::vector<MomentKey> moments{{0, 0}, {1, 0}, {0, 2}};
  friend bool operator==(const SimulateParams&, const SimulateParams&) = default;
};

struct OdeParams {
  int d = 1;
  std::optional<double> k_d;  // defaults to 1/d
  std::vector<double> moments{1.0, 0.5, 0.75};  // M0, M2, M4, ...
  double t_end = 10.0;
  double dt = 1e-3;
  std::size_t record_stride = 100;
  double rel_tol = 1e-8;
  friend bool operator==(const OdeParams&, const OdeParams&) = default;
};

struct ExactParams {
  // Initial datum: number * rate e^{-rate m} (x) N(0, sigma^2).
  double number = 1.0;
  double rate = 1.0;
  double sigma = 1.0;
  std::vector<double> t{0.0, 1.0, 10.0};
  std::vector<double> zeta{0.0, 0.5, 1.0, 2.0};
  std::vector<double> xi{0.0, 0.5, 1.0, 2.0};
  double h = 1e-3;
  friend bool operator==(const ExactParams&, const ExactParams&) = default;
};

struct LiftParams {
  double theta = 0.5;
  double scale = 1.0;
  std::vector<double> k{0.0, 1.0, 2.0};
  std::vector<double> t_grid{10.0, 31.622776601683793, 100.0, 316.22776601683796, 1000.0};
  friend bool operator==(const LiftParams&, const LiftParams&) = default;
};

struct VerifyParams {
  std::vector<std::string> criteria;  // empty: all
  std::uint64_t seed = 20240611;
  std::optional<double> inject_k1;
  friend bool operator==(const VerifyParams&, const VerifyParams&) = default;
};

struct RunConfig {
  std::variant<SimulateParams, OdeParams, ExactParams, LiftParams, VerifyParams> params;

  Command command() const { return static_cast<Command>(params.index()); }
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Every problem found in a config, one message per entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Parses and validates a JSON config. Throws ConfigError listing all
/// problems: syntax, duplicate or unknown keys, missing keys, wrong types and
/// out-of-range values.
RunConfig parse_config(std::string_view text);

/// Canonical JSON with every field spelled out; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

}  // namespace agglab
