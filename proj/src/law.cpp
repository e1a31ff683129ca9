#include "cmrp/law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cmrp/errors.hpp"
#include "cmrp/special.hpp"

namespace cmrp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw ConfigError(std::string(what) + " must be a positive finite real");
}

void check_weights(const std::vector<double>& w, const char* what) {
  if (w.empty()) throw ConfigError(std::string(what) + ": empty weights");
  double sum = 0.0;
  for (double wi : w) {
    if (wi < 0.0 || !std::isfinite(wi))
      throw ConfigError(std::string(what) + ": weights must be nonnegative");
    sum += wi;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw ConfigError(std::string(what) + ": weights must sum to 1");
}

// Marsaglia-Tsang for shape >= 1; shape < 1 boosted by u^(1/shape).
double sample_gamma_shape(double shape, RngStream& rng) {
  if (shape < 1.0) {
    double u = rng.uniform01();
    return sample_gamma_shape(shape + 1.0, rng) *
           std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = rng.normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = rng.uniform01();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

}  // namespace

Law Law::exponential(double rate) {
  check_positive(rate, "exponential rate");
  return Law{laws::Exponential{rate}};
}

Law Law::gamma(double rate, double shape, double shift) {
  check_positive(rate, "gamma rate");
  check_positive(shape, "gamma shape");
  if (shift < 0.0 || !std::isfinite(shift))
    throw ConfigError("gamma shift must be a nonnegative finite real");
  return Law{laws::Gamma{rate, shape, shift}};
}

Law Law::hyper_exponential(std::vector<double> weights,
                           std::vector<double> rates) {
  if (weights.size() != rates.size() || weights.empty())
    throw ConfigError("hyperexponential: weights/rates size mismatch");
  check_weights(weights, "hyperexponential");
  for (double r : rates) check_positive(r, "hyperexponential rate");
  return Law{laws::HyperExponential{std::move(weights), std::move(rates)}};
}

Law Law::uniform(double lo, double hi) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ConfigError("uniform requires lo < hi, both finite");
  return Law{laws::Uniform{lo, hi}};
}

Law Law::beta(double p, double q) {
  check_positive(p, "beta p");
  check_positive(q, "beta q");
  return Law{laws::Beta{p, q}};
}

Law Law::degenerate(double point) {
  if (!std::isfinite(point)) throw ConfigError("degenerate point not finite");
  return Law{laws::Degenerate{point}};
}

Law Law::finite_discrete(std::vector<double> atoms,
                         std::vector<double> weights) {
  if (atoms.size() != weights.size() || atoms.empty())
    throw ConfigError("finite_discrete: atoms/weights size mismatch");
  check_weights(weights, "finite_discrete");
  std::vector<std::size_t> idx(atoms.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t i, std::size_t j) { return atoms[i] < atoms[j]; });
  std::vector<double> a(atoms.size()), w(atoms.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    a[k] = atoms[idx[k]];
    w[k] = weights[idx[k]];
  }
  return Law{laws::FiniteDiscrete{std::move(a), std::move(w)}};
}

Law Law::tilted(Law base, std::function<double(double)> log_weight,
                double envelope) {
  if (!has_density(base))
    throw ConfigError("tilted law requires an absolutely continuous base");
  check_positive(envelope, "tilt envelope");
  return Law{laws::Tilted{std::make_shared<const Law>(std::move(base)),
                          std::move(log_weight), envelope}};
}

Support support(const Law& law) {
  return std::visit(
      Overloaded{
          [](const laws::Exponential&) { return Support{0.0, kInf}; },
          [](const laws::Gamma& g) { return Support{g.shift, kInf}; },
          [](const laws::HyperExponential&) { return Support{0.0, kInf}; },
          [](const laws::Uniform& u) { return Support{u.lo, u.hi}; },
          [](const laws::Beta&) { return Support{0.0, 1.0}; },
          [](const laws::Degenerate& d) { return Support{d.point, d.point}; },
          [](const laws::FiniteDiscrete& f) {
            return Support{f.atoms.front(), f.atoms.back()};
          },
          [](const laws::Tilted& t) { return support(*t.base); }},
      law.v);
}

bool has_density(const Law& law) {
  return !law.is<laws::Degenerate>() && !law.is<laws::FiniteDiscrete>();
}

double pdf(const Law& law, double x) {
  return std::visit(
      Overloaded{
          [x](const laws::Exponential& e) {
            return x < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * x);
          },
          [x](const laws::Gamma& g) {
            double y = x - g.shift;
            if (y < 0.0) return 0.0;
            if (y == 0.0) {
              if (g.shape < 1.0) return kInf;
              return g.shape == 1.0 ? g.rate : 0.0;
            }
            return std::exp(g.shape * std::log(g.rate) +
                            (g.shape - 1.0) * std::log(y) - g.rate * y -
                            log_gamma(g.shape));
          },
          [x](const laws::HyperExponential& h) {
            if (x < 0.0) return 0.0;
            double s = 0.0;
            for (std::size_t i = 0; i < h.rates.size(); ++i)
              s += h.weights[i] * h.rates[i] * std::exp(-h.rates[i] * x);
            return s;
          },
          [x](const laws::Uniform& u) {
            return (x < u.lo || x > u.hi) ? 0.0 : 1.0 / (u.hi - u.lo);
          },
          [x](const laws::Beta& b) {
            if (x < 0.0 || x > 1.0) return 0.0;
            if (x == 0.0 || x == 1.0) {
              // handle edge exponents
              double e0 = b.p - 1.0, e1 = b.q - 1.0;
              if ((x == 0.0 && e0 < 0.0) || (x == 1.0 && e1 < 0.0)) return kInf;
              if ((x == 0.0 && e0 > 0.0) || (x == 1.0 && e1 > 0.0)) return 0.0;
            }
            return std::exp((b.p - 1.0) * std::log(x) +
                            (b.q - 1.0) * std::log(1.0 - x) -
                            log_beta(b.p, b.q));
          },
          [](const laws::Degenerate&) -> double {
            throw UnsupportedError("pdf undefined for a degenerate law");
          },
          [](const laws::FiniteDiscrete&) -> double {
            throw UnsupportedError("pdf undefined for a finite-discrete law");
          },
          [x](const laws::Tilted& t) {
            double base = pdf(*t.base, x);
            return base == 0.0 ? 0.0 : std::exp(t.log_weight(x)) * base;
          }},
      law.v);
}

double log_pdf(const Law& law, double x) {
  return std::visit(
      Overloaded{
          [x](const laws::Exponential& e) {
            return x < 0.0 ? -kInf : std::log(e.rate) - e.rate * x;
          },
          [x](const laws::Gamma& g) {
            double y = x - g.shift;
            if (y <= 0.0) return y == 0.0 && g.shape == 1.0
                                     ? std::log(g.rate)
                                     : -kInf;
            return g.shape * std::log(g.rate) +
                   (g.shape - 1.0) * std::log(y) - g.rate * y -
                   log_gamma(g.shape);
          },
          [&law, x](const laws::HyperExponential&) {
            double d = pdf(law, x);
            return d > 0.0 ? std::log(d) : -kInf;
          },
          [x](const laws::Uniform& u) {
            return (x < u.lo || x > u.hi) ? -kInf : -std::log(u.hi - u.lo);
          },
          [x](const laws::Beta& b) {
            if (x <= 0.0 || x >= 1.0) return -kInf;
            return (b.p - 1.0) * std::log(x) +
                   (b.q - 1.0) * std::log(1.0 - x) - log_beta(b.p, b.q);
          },
          [](const laws::Degenerate&) -> double {
            throw UnsupportedError("pdf undefined for a degenerate law");
          },
          [](const laws::FiniteDiscrete&) -> double {
            throw UnsupportedError("pdf undefined for a finite-discrete law");
          },
          [x](const laws::Tilted& t) {
            return t.log_weight(x) + log_pdf(*t.base, x);
          }},
      law.v);
}

double cdf(const Law& law, double x) {
  return std::visit(
      Overloaded{
          [x](const laws::Exponential& e) {
            return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x);
          },
          [x](const laws::Gamma& g) {
            double y = x - g.shift;
            return y <= 0.0 ? 0.0 : reg_lower_gamma(g.shape, g.rate * y);
          },
          [x](const laws::HyperExponential& h) {
            if (x <= 0.0) return 0.0;
            double s = 0.0;
            for (std::size_t i = 0; i < h.rates.size(); ++i)
              s += h.weights[i] * -std::expm1(-h.rates[i] * x);
            return s;
          },
          [x](const laws::Uniform& u) {
            if (x <= u.lo) return 0.0;
            if (x >= u.hi) return 1.0;
            return (x - u.lo) / (u.hi - u.lo);
          },
          [x](const laws::Beta& b) {
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return reg_inc_beta(b.p, b.q, x);
          },
          [x](const laws::Degenerate& d) {
            return x >= d.point ? 1.0 : 0.0;
          },
          [x](const laws::FiniteDiscrete& f) {
            double s = 0.0;
            for (std::size_t i = 0; i < f.atoms.size() && f.atoms[i] <= x; ++i)
              s += f.weights[i];
            return s;
          },
          [&law, x](const laws::Tilted& t) {
            Support sup = support(*t.base);
            if (x <= sup.lo) return 0.0;
            if (x >= sup.hi) return 1.0;
            auto f = [&law](double y) { return pdf(law, y); };
            return std::min(1.0, integrate(f, sup.lo, x, 1e-12).value);
          }},
      law.v);
}

double survival(const Law& law, double x) {
  return std::visit(
      Overloaded{
          [x](const laws::Exponential& e) {
            return x <= 0.0 ? 1.0 : std::exp(-e.rate * x);
          },
          [x](const laws::Gamma& g) {
            double y = x - g.shift;
            return y <= 0.0 ? 1.0 : reg_upper_gamma(g.shape, g.rate * y);
          },
          [x](const laws::HyperExponential& h) {
            if (x <= 0.0) return 1.0;
            double s = 0.0;
            for (std::size_t i = 0; i < h.rates.size(); ++i)
              s += h.weights[i] * std::exp(-h.rates[i] * x);
            return s;
          },
          [&law, x](const laws::Uniform&) { return 1.0 - cdf(law, x); },
          [x](const laws::Beta& b) {
            if (x <= 0.0) return 1.0;
            if (x >= 1.0) return 0.0;
            return reg_inc_beta(b.q, b.p, 1.0 - x);
          },
          [x](const laws::Degenerate& d) {
            return x >= d.point ? 0.0 : 1.0;
          },
          [x](const laws::FiniteDiscrete& f) {
            double s = 0.0;
            for (std::size_t i = f.atoms.size(); i-- > 0;) {
              if (f.atoms[i] <= x) break;
              s += f.weights[i];
            }
            return s;
          },
          [&law, x](const laws::Tilted&) { return 1.0 - cdf(law, x); }},
      law.v);
}

double log_survival(const Law& law, double x) {
  return std::visit(
      Overloaded{
          [x](const laws::Exponential& e) {
            return x <= 0.0 ? 0.0 : -e.rate * x;
          },
          [x](const laws::Gamma& g) {
            double y = x - g.shift;
            if (y <= 0.0) return 0.0;
            double s = reg_upper_gamma(g.shape, g.rate * y);
            return s > 0.0 ? std::log(s) : -kInf;
          },
          [x](const laws::HyperExponential& h) {
            if (x <= 0.0) return 0.0;
            // log-sum-exp over the mixture tail
            double m = -kInf;
            for (double r : h.rates) m = std::max(m, -r * x);
            double s = 0.0;
            for (std::size_t i = 0; i < h.rates.size(); ++i)
              s += h.weights[i] * std::exp(-h.rates[i] * x - m);
            return m + std::log(s);
          },
          [&law, x](const auto&) {
            double s = survival(law, x);
            return s > 0.0 ? std::log(s) : -kInf;
          }},
      law.v);
}

double mean(const Law& law) {
  return std::visit(
      Overloaded{
          [](const laws::Exponential& e) { return 1.0 / e.rate; },
          [](const laws::Gamma& g) { return g.shape / g.rate + g.shift; },
          [](const laws::HyperExponential& h) {
            double s = 0.0;
            for (std::size_t i = 0; i < h.rates.size(); ++i)
              s += h.weights[i] / h.rates[i];
            return s;
          },
          [](const laws::Uniform& u) { return 0.5 * (u.lo + u.hi); },
          [](const laws::Beta& b) { return b.p / (b.p + b.q); },
          [](const laws::Degenerate& d) { return d.point; },
          [](const laws::FiniteDiscrete& f) {
            double s = 0.0;
            for (std::size_t i = 0; i < f.atoms.size(); ++i)
              s += f.weights[i] * f.atoms[i];
            return s;
          },
          [&law](const laws::Tilted&) {
            return expect(law, [](double x) { return x; }, 1e-12).value;
          }},
      law.v);
}

double variance(const Law& law) {
  return std::visit(
      Overloaded{
          [](const laws::Exponential& e) { return 1.0 / (e.rate * e.rate); },
          [](const laws::Gamma& g) { return g.shape / (g.rate * g.rate); },
          [&law](const laws::HyperExponential& h) {
            double m = mean(law);
            double s2 = 0.0;
            for (std::size_t i = 0; i < h.rates.size(); ++i)
              s2 += h.weights[i] * 2.0 / (h.rates[i] * h.rates[i]);
            return s2 - m * m;
          },
          [](const laws::Uniform& u) {
            double w = u.hi - u.lo;
            return w * w / 12.0;
          },
          [](const laws::Beta& b) {
            double s = b.p + b.q;
            return b.p * b.q / (s * s * (s + 1.0));
          },
          [](const laws::Degenerate&) { return 0.0; },
          [&law](const laws::FiniteDiscrete& f) {
            double m = mean(law);
            double s = 0.0;
            for (std::size_t i = 0; i < f.atoms.size(); ++i) {
              double d = f.atoms[i] - m;
              s += f.weights[i] * d * d;
            }
            return s;
          },
          [&law](const laws::Tilted&) {
            double m = mean(law);
            return expect(law,
                          [m](double x) { return (x - m) * (x - m); },
                          1e-12)
                .value;
          }},
      law.v);
}

double mgf(const Law& law, double s) {
  return std::visit(
      Overloaded{
          [s](const laws::Exponential& e) {
            if (s >= e.rate)
              throw DomainError("mgf of exponential diverges at s >= rate");
            return e.rate / (e.rate - s);
          },
          [s](const laws::Gamma& g) {
            if (s >= g.rate)
              throw DomainError("mgf of gamma diverges at s >= rate");
            return std::pow(g.rate / (g.rate - s), g.shape) *
                   std::exp(s * g.shift);
          },
          [s](const laws::HyperExponential& h) {
            double acc = 0.0;
            for (std::size_t i = 0; i < h.rates.size(); ++i) {
              if (s >= h.rates[i])
                throw DomainError("mgf diverges at s >= smallest rate");
              acc += h.weights[i] * h.rates[i] / (h.rates[i] - s);
            }
            return acc;
          },
          [s](const laws::Uniform& u) {
            if (s == 0.0) return 1.0;
            return (std::exp(s * u.hi) - std::exp(s * u.lo)) /
                   (s * (u.hi - u.lo));
          },
          [s](const laws::Degenerate& d) { return std::exp(s * d.point); },
          [s](const laws::FiniteDiscrete& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.atoms.size(); ++i)
              acc += f.weights[i] * std::exp(s * f.atoms[i]);
            return acc;
          },
          [&law, s](const auto&) {
            QuadResult r =
                expect(law, [s](double x) { return std::exp(s * x); }, 1e-12);
            if (!r.converged) throw DomainError("mgf quadrature diverged");
            return r.value;
          }},
      law.v);
}

double quantile(const Law& law, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level in [0,1]");
  return std::visit(
      Overloaded{
          [q](const laws::Exponential& e) {
            return q >= 1.0 ? kInf : -std::log1p(-q) / e.rate;
          },
          [q](const laws::Uniform& u) { return u.lo + q * (u.hi - u.lo); },
          [q](const laws::Degenerate& d) {
            (void)q;
            return d.point;
          },
          [q](const laws::FiniteDiscrete& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.atoms.size(); ++i) {
              acc += f.weights[i];
              if (acc >= q - 1e-15) return f.atoms[i];
            }
            return f.atoms.back();
          },
          [&law, q](const auto&) {
            if (q <= 0.0) return support(law).lo;
            if (q >= 1.0) return support(law).hi;
            // bracket then bisect on the CDF
            Support sup = support(law);
            double lo = sup.lo;
            double hi = std::isfinite(sup.hi) ? sup.hi : std::max(1.0, lo + 1.0);
            if (!std::isfinite(sup.hi)) {
              while (cdf(law, hi) < q) hi = lo + (hi - lo) * 2.0;
            }
            for (int i = 0; i < 200; ++i) {
              double mid = 0.5 * (lo + hi);
              if (mid <= lo || mid >= hi) break;
              (cdf(law, mid) < q ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
          }},
      law.v);
}

double sample(const Law& law, RngStream& rng) {
  return std::visit(
      Overloaded{
          [&rng](const laws::Exponential& e) {
            return rng.exponential(e.rate);
          },
          [&rng](const laws::Gamma& g) {
            return g.shift + sample_gamma_shape(g.shape, rng) / g.rate;
          },
          [&rng](const laws::HyperExponential& h) {
            double u = rng.uniform01();
            double acc = 0.0;
            std::size_t pick = h.rates.size() - 1;
            for (std::size_t i = 0; i < h.weights.size(); ++i) {
              acc += h.weights[i];
              if (u <= acc) {
                pick = i;
                break;
              }
            }
            return rng.exponential(h.rates[pick]);
          },
          [&rng](const laws::Uniform& u) { return rng.uniform(u.lo, u.hi); },
          [&rng](const laws::Beta& b) {
            double x = sample_gamma_shape(b.p, rng);
            double y = sample_gamma_shape(b.q, rng);
            return x / (x + y);
          },
          [](const laws::Degenerate& d) { return d.point; },
          [&rng](const laws::FiniteDiscrete& f) {
            double u = rng.uniform01();
            double acc = 0.0;
            for (std::size_t i = 0; i < f.weights.size(); ++i) {
              acc += f.weights[i];
              if (u <= acc) return f.atoms[i];
            }
            return f.atoms.back();
          },
          [&rng](const laws::Tilted& t) {
            double log_env = std::log(t.envelope);
            for (int i = 0; i < 1000000; ++i) {
              double x = sample(*t.base, rng);
              double lw = t.log_weight(x);
              if (lw > log_env + 1e-9)
                throw DomainError("tilt envelope violated during rejection");
              if (std::log(rng.uniform01()) < lw - log_env) return x;
            }
            throw DomainError("rejection sampling failed to accept");
          }},
      law.v);
}

double log_rn_exp_over_kernel(const Law& kernel, double rate, double w) {
  if (!(rate > 0.0)) throw DomainError("likelihood ratio requires rate > 0");
  if (!has_density(kernel))
    throw UnsupportedError("likelihood ratio needs an abs. continuous kernel");
  double lk = log_pdf(kernel, w);
  if (!std::isfinite(lk))
    throw DomainError("interarrival outside the kernel support");
  return std::log(rate) - rate * w - lk;
}

double rn_exp_over_kernel(const Law& kernel, double rate, double w) {
  return std::exp(log_rn_exp_over_kernel(kernel, rate, w));
}

QuadResult expect(const Law& law, const std::function<double(double)>& h,
                  double abs_tol) {
  if (const auto* d = law.get_if<laws::Degenerate>()) {
    return {h(d->point), 0.0, 1, true};
  }
  if (const auto* f = law.get_if<laws::FiniteDiscrete>()) {
    double s = 0.0;
    for (std::size_t i = 0; i < f->atoms.size(); ++i)
      s += f->weights[i] * h(f->atoms[i]);
    return {s, 0.0, f->atoms.size(), true};
  }
  Support sup = support(law);
  auto f = [&law, &h](double x) { return h(x) * pdf(law, x); };
  if (std::isfinite(sup.hi)) return integrate(f, sup.lo, sup.hi, abs_tol);
  // split at a central point so the adaptive rule sees the bulk first
  double split = std::min(quantile(law, 0.5) * 2.0 + 1.0, sup.lo + 1e6);
  if (split <= sup.lo) split = sup.lo + 1.0;
  QuadResult head = integrate(f, sup.lo, split, abs_tol * 0.5);
  QuadResult tail = integrate_upper_inf(f, split, abs_tol * 0.5);
  return {head.value + tail.value, head.error + tail.error,
          head.evals + tail.evals, head.converged && tail.converged};
}

std::string describe(const Law& law) {
  std::ostringstream os;
  std::visit(
      Overloaded{
          [&](const laws::Exponential& e) {
            os << "exponential(rate=" << e.rate << ")";
          },
          [&](const laws::Gamma& g) {
            os << "gamma(rate=" << g.rate << ", shape=" << g.shape;
            if (g.shift != 0.0) os << ", shift=" << g.shift;
            os << ")";
          },
          [&](const laws::HyperExponential& h) {
            os << "hyperexponential(k=" << h.rates.size() << ")";
          },
          [&](const laws::Uniform& u) {
            os << "uniform(" << u.lo << ", " << u.hi << ")";
          },
          [&](const laws::Beta& b) {
            os << "beta(" << b.p << ", " << b.q << ")";
          },
          [&](const laws::Degenerate& d) {
            os << "degenerate(" << d.point << ")";
          },
          [&](const laws::FiniteDiscrete& f) {
            os << "finite_discrete(n=" << f.atoms.size() << ")";
          },
          [&](const laws::Tilted& t) {
            os << "tilted(" << describe(*t.base) << ")";
          }},
      law.v);
  return os.str();
}

}  // namespace cmrp
