#ifndef CMRP_SPECIAL_HPP
#define CMRP_SPECIAL_HPP

namespace cmrp {

/// log Gamma(x) for x > 0 (Lanczos approximation, ~1e-14 relative).
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x); series/continued-fraction
/// hybrid, absolute accuracy ~1e-14.
double reg_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double reg_upper_gamma(double a, double x);

/// Regularized incomplete beta I_x(p, q).
double reg_inc_beta(double p, double q, double x);

/// log Beta(p, q).
double log_beta(double p, double q);

}  // namespace cmrp

#endif  // CMRP_SPECIAL_HPP
