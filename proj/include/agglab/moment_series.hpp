#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "agglab/kernels.hpp"

namespace agglab {

enum class Provenance { MonteCarlo, Ode, ClosedForm };

std::string to_string(Provenance p);

/// Exponent pair (alpha, beta) of M_{alpha,beta} = \int m^alpha |p|^beta f.
struct MomentKey {
  double alpha = 0.0;
  double beta = 0.0;
  friend bool operator==(const MomentKey&, const MomentKey&) = default;
};

/// Moments on a time grid. values[c][k] is column c at t[k]; `error` holds
/// matching standard errors and is present iff the data are Monte Carlo.
struct MomentSeries {
  std::vector<double> t;
  std::vector<MomentKey> keys;
  std::vector<std::vector<double>> values;
  std::optional<std::vector<std::vector<double>>> error;
  Provenance provenance = Provenance::ClosedForm;

  // Metadata.
  std::optional<KernelSpec> kernel;
  int dim = 1;
  std::size_t n_runs = 0;

  bool has(double alpha, double beta) const;
  std::size_t index_of(double alpha, double beta) const;
  const std::vector<double>& column(double alpha, double beta) const;
  /// Throws std::invalid_argument when the series carries no standard errors.
  const std::vector<double>& error_column(double alpha, double beta) const;

  void add_column(MomentKey key, std::vector<double> v,
                  std::optional<std::vector<double>> err = std::nullopt);

  /// Checks the shape invariants; throws std::invalid_argument on violation.
  void validate() const;
};

struct BoundRow {
  std::string claim;
  double t = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  /// measured / bound for upper bounds, bound / measured for lower bounds;
  /// values above 1 mean the raw numbers are on the wrong side.
  double slack = 0.0;
  bool pass = true;
};

struct BoundReport {
  std::string claim_id;
  double tolerance = 0.0;  // multiplicative model slack
  double nsigma = 0.0;     // standard errors of statistical slack
  std::vector<BoundRow> rows;

  bool passed() const;
  /// First failing row, if any.
  std::optional<BoundRow> first_failure() const;
};

}  // namespace agglab
