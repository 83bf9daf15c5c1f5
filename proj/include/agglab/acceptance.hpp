#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace agglab {

struct AcceptanceOptions {
  unsigned threads = 1;
  std::uint64_t seed = 20240611;
  /// Overrides k_1 in the gamma = 2 integrations (fault injection).
  std::optional<double> inject_k1;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;
  std::string tolerance;
  double seconds = 0.0;
};

/// "A1" .. "A10".
std::vector<std::string> criterion_ids();

/// Throws std::invalid_argument for an unknown id. Runtime errors inside a
/// criterion are reported as failures, not thrown.
CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& opts);

std::string format_result(const CriterionResult& r);

}  // namespace agglab
