#ifndef CMRP_LAW_HPP
#define CMRP_LAW_HPP

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cmrp/quadrature.hpp"
#include "cmrp/rng.hpp"

namespace cmrp {

struct Law;

namespace laws {

/// Exp(rate): mean 1/rate. All rate parameters in this library follow the
/// rate convention (not scale).
struct Exponential {
  double rate;
};

/// Gamma(rate, shape): mean shape/rate; Gamma(b,1) == Exp(b). An optional
/// location shift moves the support to [shift, inf).
struct Gamma {
  double rate;
  double shape;
  double shift = 0.0;
};

/// Finite mixture of exponentials.
struct HyperExponential {
  std::vector<double> weights;
  std::vector<double> rates;
};

struct Uniform {
  double lo;
  double hi;
};

struct Beta {
  double p;
  double q;
};

/// Point mass; has a CDF but no density.
struct Degenerate {
  double point;
};

/// Finite support with weights; atoms kept sorted ascending.
struct FiniteDiscrete {
  std::vector<double> atoms;
  std::vector<double> weights;
};

/// Absolutely continuous reweighting of a base law: pdf proportional to
/// exp(log_weight(x)) * base pdf, assumed already normalized. Sampling is
/// by rejection with the supplied envelope >= sup exp(log_weight).
struct Tilted {
  std::shared_ptr<const Law> base;
  std::function<double(double)> log_weight;
  double envelope;
};

}  // namespace laws

/// A parametric scalar distribution. Values are immutable and freely
/// shareable across threads; every operation except sampling is pure.
struct Law {
  using Variant =
      std::variant<laws::Exponential, laws::Gamma, laws::HyperExponential,
                   laws::Uniform, laws::Beta, laws::Degenerate,
                   laws::FiniteDiscrete, laws::Tilted>;
  Variant v;

  static Law exponential(double rate);
  static Law gamma(double rate, double shape, double shift = 0.0);
  static Law hyper_exponential(std::vector<double> weights,
                               std::vector<double> rates);
  static Law uniform(double lo, double hi);
  static Law beta(double p, double q);
  static Law degenerate(double point);
  static Law finite_discrete(std::vector<double> atoms,
                             std::vector<double> weights);
  static Law tilted(Law base, std::function<double(double)> log_weight,
                    double envelope);

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(v);
  }
};

/// Closed support [lo, hi]; hi may be +inf.
struct Support {
  double lo;
  double hi;
};

Support support(const Law& law);

/// True when the law has a Lebesgue density (pdf / log_pdf defined).
bool has_density(const Law& law);

double pdf(const Law& law, double x);
double log_pdf(const Law& law, double x);
double cdf(const Law& law, double x);
double survival(const Law& law, double x);

/// log survival computed directly per family (no exp/log round trip), so
/// likelihood ratios of identical laws cancel exactly.
double log_survival(const Law& law, double x);

double mean(const Law& law);
double variance(const Law& law);

/// E[exp(s X)]; closed form where available, quadrature otherwise.
double mgf(const Law& law, double s);

/// Generalized inverse CDF.
double quantile(const Law& law, double q);

double sample(const Law& law, RngStream& rng);

/// Likelihood ratio dExp(rate)/d(kernel) at w, and its log form. The log
/// form is the one meant for accumulation along paths.
double rn_exp_over_kernel(const Law& kernel, double rate, double w);
double log_rn_exp_over_kernel(const Law& kernel, double rate, double w);

/// E[h(X)] for X ~ law, by exact summation for discrete laws and adaptive
/// quadrature otherwise.
QuadResult expect(const Law& law, const std::function<double(double)>& h,
                  double abs_tol = 1e-10);

/// Short human-readable description, e.g. "gamma(rate=2, shape=12)".
std::string describe(const Law& law);

}  // namespace cmrp

#endif  // CMRP_LAW_HPP
