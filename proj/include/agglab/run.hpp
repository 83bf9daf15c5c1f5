#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "agglab/config.hpp"

namespace agglab {

/// Output of one command. Cells are JSON scalars; null prints as an empty CSV
/// field.
struct ResultTable {
  nlohmann::ordered_json metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;
  /// 0 = all checks pass, 1 = a check failed.
  int status = 0;
  /// Human-readable lines for the terminal (not part of the data).
  std::vector<std::string> log;
};

std::string code_version();

/// FNV-1a 64 of the canonical config text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Runs the command. `threads` only affects wall time, never the output.
ResultTable run(const RunConfig& cfg, unsigned threads = 1);

/// Shortest text that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_number(double v);

std::string to_csv(const ResultTable& table);
/// Metadata, columns and rows.
std::string to_json(const ResultTable& table);

}  // namespace agglab
