#pragma once

#include <functional>

namespace agglab {

/// Adaptive 31-point Gauss-Kronrod on [a, b]; either end may be infinite.
struct Quadrature {
  double rel_tol = 1e-12;
  unsigned max_depth = 20;

  double operator()(const std::function<double(double)>& f, double a, double b,
                    double* error_estimate = nullptr) const;
};

}  // namespace agglab
