#include "agglab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace agglab {

double Quadrature::operator()(const std::function<double(double)>& f, double a, double b,
                              double* error_estimate) const {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &err);
  if (error_estimate) *error_estimate = err;
  return v;
}

}  // namespace agglab
