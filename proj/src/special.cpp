#include "cmrp/special.hpp"

#include <cmath>
#include <limits>

#include "cmrp/errors.hpp"

namespace cmrp {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos, g = 7, 9 coefficients.
const double kLanczos[9] = {0.99999999999980993,     676.5203681218851,
                            -1259.1392167224028,     771.32342877765313,
                            -176.61502916214059,     12.507343278686905,
                            -0.13857109526572012,    9.9843695780195716e-6,
                            1.5056327351493116e-7};

// P(a,x) by power series, valid and fast for x < a + 1.
double lower_gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16)
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Q(a,x) by modified Lentz continued fraction, for x >= a + 1.
double upper_gamma_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Continued fraction for the incomplete beta (Numerical-Recipes style).
double beta_cf(double p, double q, double x) {
  const double tiny = 1e-300;
  double qab = p + q;
  double qap = p + 1.0;
  double qam = p - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (q - m) * x / ((qam + m2) * (p + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(p + m) * (qab + m) * x / ((p + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
  if (x < 0.5) {
    // reflection
    return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  }
  x -= 1.0;
  double a = kLanczos[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return 0.5 * std::log(2.0 * kPi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0)) throw DomainError("reg_lower_gamma requires a > 0");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return lower_gamma_series(a, x);
  return 1.0 - upper_gamma_cf(a, x);
}

double reg_upper_gamma(double a, double x) {
  if (!(a > 0.0)) throw DomainError("reg_upper_gamma requires a > 0");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - lower_gamma_series(a, x);
  return upper_gamma_cf(a, x);
}

double log_beta(double p, double q) {
  return log_gamma(p) + log_gamma(q) - log_gamma(p + q);
}

double reg_inc_beta(double p, double q, double x) {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("reg_inc_beta parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double front =
      std::exp(p * std::log(x) + q * std::log(1.0 - x) - log_beta(p, q));
  if (x < (p + 1.0) / (p + q + 2.0)) return front * beta_cf(p, q, x) / p;
  return 1.0 - std::exp(q * std::log(1.0 - x) + p * std::log(x) -
                        log_beta(q, p)) *
                   beta_cf(q, p, 1.0 - x) / q;
}

}  // namespace cmrp
