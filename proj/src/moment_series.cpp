#include "agglab/moment_series.hpp"

#include <algorithm>
#include <stdexcept>

namespace agglab {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::MonteCarlo: return "monte-carlo";
    case Provenance::Ode: return "ode";
    case Provenance::ClosedForm: return "closed-form";
  }
  return "?";
}

bool MomentSeries::has(double alpha, double beta) const {
  return std::find(keys.begin(), keys.end(), MomentKey{alpha, beta}) != keys.end();
}

std::size_t MomentSeries::index_of(double alpha, double beta) const {
  auto it = std::find(keys.begin(), keys.end(), MomentKey{alpha, beta});
  if (it == keys.end())
    throw std::invalid_argument("series has no column M_{" + std::to_string(alpha) + "," +
                                std::to_string(beta) + "}");
  return static_cast<std::size_t>(it - keys.begin());
}

const std::vector<double>& MomentSeries::column(double alpha, double beta) const {
  return values.at(index_of(alpha, beta));
}

const std::vector<double>& MomentSeries::error_column(double alpha, double beta) const {
  if (!error) throw std::invalid_argument("series carries no standard errors");
  return error->at(index_of(alpha, beta));
}

void MomentSeries::add_column(MomentKey key, std::vector<double> v,
                              std::optional<std::vector<double>> err) {
  if (v.size() != t.size()) throw std::invalid_argument("column length does not match time grid");
  if (err.has_value() != error.has_value() && !keys.empty())
    throw std::invalid_argument("standard errors must be given for all columns or none");
  if (keys.empty() && err) error.emplace();
  keys.push_back(key);
  values.push_back(std::move(v));
  if (err) {
    if (err->size() != t.size()) throw std::invalid_argument("error column length mismatch");
    error->push_back(std::move(*err));
  }
}

void MomentSeries::validate() const {
  if (values.size() != keys.size()) throw std::invalid_argument("keys/values size mismatch");
  for (const auto& c : values)
    if (c.size() != t.size()) throw std::invalid_argument("column length does not match time grid");
  if ((provenance == Provenance::MonteCarlo) != error.has_value())
    throw std::invalid_argument("standard errors must be present iff provenance is monte-carlo");
  if (error) {
    if (error->size() != keys.size()) throw std::invalid_argument("error column count mismatch");
    for (const auto& c : *error)
      if (c.size() != t.size()) throw std::invalid_argument("error column length mismatch");
  }
}

bool BoundReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.pass; });
}

std::optional<BoundRow> BoundReport::first_failure() const {
  for (const auto& r : rows)
    if (!r.pass) return r;
  return std::nullopt;
}

}  // namespace agglab
