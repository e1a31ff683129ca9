#ifndef CMRP_QUADRATURE_HPP
#define CMRP_QUADRATURE_HPP

#include <cstddef>
#include <functional>

namespace cmrp {

/// Result of an adaptive quadrature: value, an error estimate, and
/// whether the requested tolerance was reached.
struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b].
/// Splits the interval with the largest error estimate until the summed
/// error is below abs_tol or the interval budget is exhausted.
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double abs_tol = 1e-10,
                     std::size_t max_intervals = 2000);

/// Integral of f over [a, +inf), via the substitution x = a + t/(1-t).
QuadResult integrate_upper_inf(const std::function<double(double)>& f,
                               double a, double abs_tol = 1e-10,
                               std::size_t max_intervals = 2000);

}  // namespace cmrp

#endif  // CMRP_QUADRATURE_HPP
