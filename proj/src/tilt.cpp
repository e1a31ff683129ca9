#include "cmrp/tilt.hpp"

#include <cmath>
#include <limits>

#include "cmrp/errors.hpp"
#include "cmrp/stats.hpp"

namespace cmrp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double s = sum + y;
    c = (s - sum) - y;
    sum = s;
  }
};

std::function<double(const Theta&)> zero_theta_fn() {
  return [](const Theta&) { return 0.0; };
}

std::function<double(const Theta&)> one_theta_fn() {
  return [](const Theta&) { return 1.0; };
}

/// rho matching the model's own kernel: extracts exponential rates
/// bit-exactly so the identity change of measure cancels exactly.
std::function<double(const Theta&)> identity_rho(const RiskModel& model) {
  Kernel kernel = model.kernel;
  return [kernel](const Theta& th) {
    if (auto r = kernel.exp_rate_at(th)) return *r;
    return 1.0 / kernel.mean_at(th);
  };
}

bool close_rel(double a, double b, double tol = 1e-12) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

/// Exponential reweighting e^{s x} / mgf of a base law in closed form
/// where the family permits; bounded-support laws fall back to a tilted
/// law with an exact envelope; nullopt when neither applies.
std::optional<Law> exp_tilt_closed(const Law& base, double s,
                                   double log_mgf_value) {
  if (s == 0.0) return base;
  if (const auto* e = base.get_if<laws::Exponential>()) {
    if (s >= e->rate) throw DomainError("exponential tilt diverges");
    return Law::exponential(e->rate - s);
  }
  if (const auto* g = base.get_if<laws::Gamma>()) {
    if (s >= g->rate) throw DomainError("gamma tilt diverges");
    return Law::gamma(g->rate - s, g->shape, g->shift);
  }
  if (const auto* h = base.get_if<laws::HyperExponential>()) {
    std::vector<double> w(h->weights.size()), r(h->rates.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < h->rates.size(); ++i) {
      if (s >= h->rates[i]) throw DomainError("mixture tilt diverges");
      r[i] = h->rates[i] - s;
      w[i] = h->weights[i] * h->rates[i] / (h->rates[i] - s);
      norm += w[i];
    }
    for (double& wi : w) wi /= norm;
    return Law::hyper_exponential(std::move(w), std::move(r));
  }
  if (const auto* d = base.get_if<laws::Degenerate>()) return Law::degenerate(d->point);
  if (const auto* f = base.get_if<laws::FiniteDiscrete>()) {
    std::vector<double> w(f->weights.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < f->atoms.size(); ++i) {
      w[i] = f->weights[i] * std::exp(s * f->atoms[i]);
      norm += w[i];
    }
    for (double& wi : w) wi /= norm;
    return Law::finite_discrete(f->atoms, std::move(w));
  }
  Support sup = support(base);
  if (std::isfinite(sup.hi)) {
    double peak = std::max(s * sup.lo, s * sup.hi) - log_mgf_value;
    return Law::tilted(
        base,
        [s, log_mgf_value](double x) { return s * x - log_mgf_value; },
        std::exp(peak) * (1.0 + 1e-12));
  }
  return std::nullopt;
}

void require(bool cond, const std::string& message) {
  if (!cond) throw ConfigError(message);
}

}  // namespace

double Tilt::alpha(const RiskModel& model, const Theta& theta) const {
  double r = rho(theta);
  if (!(r > 0.0)) throw DomainError("rho(theta) must be positive");
  double defect = alpha_defect ? alpha_defect(theta) : 0.0;
  return std::log(r) + std::log(model.conditional_mean_interarrival(theta)) +
         defect;
}

double alpha_from_rho(const RiskModel& model,
                      const std::function<double(const Theta&)>& rho,
                      const Theta& theta) {
  double r = rho(theta);
  if (!(r > 0.0)) throw DomainError("rho(theta) must be positive");
  return std::log(r) + std::log(model.conditional_mean_interarrival(theta));
}

double rho_from_alpha(const RiskModel& model, double alpha,
                      const Theta& theta) {
  return std::exp(alpha) / model.conditional_mean_interarrival(theta);
}

TiltValidation validate_tilt(const RiskModel& model, const Tilt& tilt,
                             double tol, double mc_tol) {
  TiltValidation v;
  v.ell = tilt.ell;
  v.tol = tol;
  const int ell = tilt.ell;

  QuadResult eg = expect(
      model.claims, [&tilt](double x) { return std::exp(tilt.gamma(x)); });
  QuadResult exg = expect(model.claims, [&tilt, ell](double x) {
    return std::pow(x, ell) * std::exp(tilt.gamma(x));
  });
  QuadResult exi = expect_theta(
      model, [&tilt](const Theta& th) { return tilt.xi(th); });
  QuadResult exr = expect_theta(model, [&tilt, ell](const Theta& th) {
    return tilt.xi(th) * std::pow(tilt.rho(th), ell);
  });

  bool quad_ok =
      eg.converged && exg.converged && exi.converged && exr.converged;
  if (!quad_ok) {
    // Monte Carlo fallback at its own tolerance
    const std::size_t n = 1'000'000;
    RngStream rng(0x5EEDF00Dull, 0);
    Kahan sg, sxg, sxi, sxr;
    for (std::size_t i = 0; i < n; ++i) {
      double x = sample(model.claims, rng);
      Theta th = model.sample_theta(rng);
      sg.add(std::exp(tilt.gamma(x)));
      sxg.add(std::pow(x, ell) * std::exp(tilt.gamma(x)));
      sxi.add(tilt.xi(th));
      sxr.add(tilt.xi(th) * std::pow(tilt.rho(th), ell));
    }
    double dn = static_cast<double>(n);
    eg = {sg.sum / dn, mc_tol, n, true};
    exg = {sxg.sum / dn, mc_tol, n, true};
    exi = {sxi.sum / dn, mc_tol, n, true};
    exr = {sxr.sum / dn, mc_tol, n, true};
    v.used_mc = true;
    v.tol = mc_tol;
    if (!std::isfinite(eg.value) || !std::isfinite(exi.value))
      throw InconclusiveError(
          "tilt validation inconclusive: quadrature did not converge and "
          "the sampling fallback is unstable");
  }

  v.e_exp_gamma = eg.value;
  v.e_exp_gamma_err = eg.error;
  v.e_xl_gamma = exg.value;
  v.e_xl_gamma_err = exg.error;
  v.e_xi = exi.value;
  v.e_xi_err = exi.error;
  v.e_xi_rho_l = exr.value;
  v.e_xi_rho_l_err = exr.error;

  double use_tol = v.used_mc ? mc_tol : tol;
  v.gamma_ok = std::fabs(v.e_exp_gamma - 1.0) <= use_tol;
  v.xi_ok = std::fabs(v.e_xi - 1.0) <= use_tol;
  // positivity of xi spot-checked on the quantile grid
  for (const Theta& th : theta_grid(model, 16)) {
    if (!(tilt.xi(th) > 0.0)) {
      v.xi_ok = false;
      break;
    }
  }
  v.moments_finite = std::isfinite(v.e_xl_gamma) && std::isfinite(v.e_xi_rho_l);
  v.pass = v.gamma_ok && v.xi_ok && v.moments_finite;
  return v;
}

double log_density(const RiskModel& model, const Tilt& tilt, const Path& path,
                   double t) {
  std::size_t n = count_at(path, t);
  const Theta& th = path.theta;
  double rho = tilt.rho(th);
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw DomainError("rho(theta) must be positive finite");
  double xi = tilt.xi(th);
  if (!(xi > 0.0)) throw DomainError("xi(theta) must be positive");
  double defect = tilt.alpha_defect ? tilt.alpha_defect(th) : 0.0;
  Law kernel_law = model.kernel.at(th);
  double log_rho = std::log(rho);

  Kahan acc;
  acc.add(std::log(xi));
  for (std::size_t j = 0; j < n; ++j) {
    double w = path.interarrival(j);
    double lk = log_pdf(kernel_law, w);
    if (!std::isfinite(lk))
      throw DomainError("singular kernel density at an interarrival");
    acc.add(tilt.gamma(path.claims[j]));
    if (defect != 0.0) acc.add(defect);
    acc.add(log_rho - rho * w - lk);
  }
  double resid = t - (n > 0 ? path.arrivals[n - 1] : 0.0);
  if (resid > 0.0) {
    double ls = log_survival(kernel_law, resid);
    if (!std::isfinite(ls))
      throw DomainError("singular survival factor at the residual");
    acc.add(-rho * resid - ls);
  }
  return acc.sum;
}

double log_density_literal(const RiskModel& model, const Tilt& tilt,
                           const Path& path, double t) {
  std::size_t n = count_at(path, t);
  const Theta& th = path.theta;
  double rho = tilt.rho(th);
  double xi = tilt.xi(th);
  double cond_mean = model.conditional_mean_interarrival(th);
  double defect = tilt.alpha_defect ? tilt.alpha_defect(th) : 0.0;
  double alpha = std::log(rho) + std::log(cond_mean) + defect;
  Law kernel_law = model.kernel.at(th);

  double s_beta = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    s_beta += tilt.gamma(path.claims[j]) + alpha;
  double resid = t - (n > 0 ? path.arrivals[n - 1] : 0.0);
  double acc = std::log(xi) + s_beta - rho * resid -
               static_cast<double>(n) * std::log(rho * cond_mean) -
               std::log(1.0 - cdf(kernel_law, resid));
  for (std::size_t j = 0; j < n; ++j) {
    double w = path.interarrival(j);
    acc += std::log(rho * std::exp(-rho * w)) - log_pdf(kernel_law, w);
  }
  return acc;
}

RiskModel q_model(const RiskModel& model, const Tilt& tilt) {
  RiskModel q = model;
  q.kernel = Kernel::exp_of_rate(tilt.rho, "exp_rho:" + tilt.name);

  if (tilt.q_claims) {
    q.claims = *tilt.q_claims;
  } else {
    if (!tilt.claim_envelope)
      throw ConfigError(
          "q_model: claim tilt has no closed form and no rejection envelope");
    auto gamma = tilt.gamma;
    q.claims = Law::tilted(
        model.claims, [gamma](double x) { return gamma(x); },
        *tilt.claim_envelope);
  }

  if (model.dim() == 2) {
    if (tilt.q_mixing1 && tilt.q_mixing2) {
      q.mixing1 = *tilt.q_mixing1;
      q.mixing2 = *tilt.q_mixing2;
    } else {
      throw ConfigError(
          "q_model: two-dimensional mixing requires closed-form Q mixing "
          "laws (product xi only)");
    }
  } else {
    if (tilt.q_mixing1) {
      q.mixing1 = *tilt.q_mixing1;
    } else {
      if (!tilt.xi_envelope)
        throw ConfigError(
            "q_model: mixing tilt has no closed form and no rejection "
            "envelope");
      auto xi = tilt.xi;
      q.mixing1 = Law::tilted(
          model.mixing1,
          [xi](double t1) {
            Theta th;
            th.v1 = t1;
            return std::log(xi(th));
          },
          *tilt.xi_envelope);
    }
  }
  return q;
}

Tilt identity_tilt(const RiskModel& model) {
  Tilt t;
  t.name = "identity";
  t.gamma = [](double) { return 0.0; };
  t.rho = identity_rho(model);
  t.alpha_defect = zero_theta_fn();
  t.xi = one_theta_fn();
  t.q_claims = model.claims;
  t.q_mixing1 = model.mixing1;
  t.q_mixing2 = model.mixing2;
  t.claim_envelope = 1.0;
  t.xi_envelope = 1.0;
  t.ell = 2;
  return t;
}

Tilt esscher_gamma(const RiskModel& model, double c) {
  Tilt t;
  t.name = "esscher";
  t.params["c"] = c;
  double log_mgf = std::log(mgf(model.claims, c));
  t.gamma = [c, log_mgf](double x) { return c * x - log_mgf; };
  t.rho = identity_rho(model);
  t.alpha_defect = zero_theta_fn();
  t.xi = one_theta_fn();
  t.q_claims = exp_tilt_closed(model.claims, c, log_mgf);
  if (!t.q_claims && c != 0.0) {
    // unbounded support without a closed form: no finite envelope exists
    t.claim_envelope = std::nullopt;
  } else if (c == 0.0) {
    t.claim_envelope = 1.0;
  }
  t.q_mixing1 = model.mixing1;
  t.q_mixing2 = model.mixing2;
  t.xi_envelope = 1.0;
  t.ell = 2;
  if (model.kernel.family() == Kernel::Family::ExpTheta)
    t.q_premium_direction = Monotone::Increasing;
  return t;
}

Tilt example1_tilt(const RiskModel& model, double zeta, double c) {
  require(c > 2.0, "example1 tilt requires c > 2");
  require(zeta > 0.0, "example1 tilt requires zeta > 0");
  const auto* g = model.claims.get_if<laws::Gamma>();
  require(g && g->shift == 0.0 && close_rel(g->shape, 2.0) &&
              close_rel(g->rate, zeta),
          "example1 tilt requires claims gamma(rate=zeta, shape=2)");
  require(model.kernel.family() == Kernel::Family::HyperExpHalf &&
              model.dim() == 2,
          "example1 tilt requires the two-point exponential-mixture kernel");

  Tilt t;
  t.name = "example1";
  t.params["zeta"] = zeta;
  t.params["c"] = c;
  double ex = 2.0 / zeta;                  // E[X1]
  double icpt = std::log(ex / (2.0 * c));  // ln(E[X1]/(2c))
  double slope = 2.0 * (c - 1.0) / (c * ex);
  t.gamma = [icpt, slope](double x) { return icpt - std::log(x) + slope * x; };
  t.rho = [](const Theta& th) { return 2.0 / (th.t1() + th.t2()); };
  t.alpha_defect = zero_theta_fn();
  t.xi = one_theta_fn();
  t.q_claims = Law::exponential(zeta / c);
  t.q_mixing1 = model.mixing1;
  t.q_mixing2 = model.mixing2;
  t.xi_envelope = 1.0;
  t.ell = 2;
  return t;
}

namespace {

Tilt example2_common(const RiskModel& model, double k, double eta, double c,
                     double d, double b1, double b2, double a,
                     const char* name) {
  require(eta > 0.0 && c >= 0.0 && c < eta,
          "example2 tilt requires 0 <= c < eta");
  require(d > 0.0 && d < k, "example2 tilt requires 0 < d < k");
  require(b1 > 0.0 && b2 > 0.0 && a > 0.0,
          "example2 tilt requires positive b1, b2, a");
  bool kernel_ok =
      (model.kernel.family() == Kernel::Family::GammaTheta &&
       close_rel(model.kernel.shape(), k)) ||
      (model.kernel.family() == Kernel::Family::ExpTheta && k == 1.0);
  require(kernel_ok, "example2 tilt requires the gamma(theta, k) kernel");
  const auto* cl = model.claims.get_if<laws::Exponential>();
  require(cl && close_rel(cl->rate, eta),
          "example2 tilt requires exponential claims with rate eta");
  const auto* mx = model.mixing1.get_if<laws::Gamma>();
  require(model.dim() == 1 && mx && mx->shift == 0.0 &&
              close_rel(mx->rate, b1) && close_rel(mx->shape, a),
          "example2 tilt requires gamma(b1, a) mixing");

  Tilt t;
  t.name = name;
  t.params = {{"k", k}, {"eta", eta}, {"c", c}, {"d", d},
              {"b1", b1}, {"b2", b2}, {"a", a}};
  double icpt = std::log1p(-c / eta);  // ln(1 - c E[X1])
  t.gamma = [icpt, c](double x) { return icpt + c * x; };
  t.rho = [d](const Theta& th) { return th.t1() / d; };
  t.alpha_defect = zero_theta_fn();
  double lxi0 = a * (std::log(b2) - std::log(b1));
  t.xi = [lxi0, b1, b2](const Theta& th) {
    return std::exp(lxi0 - (b2 - b1) * th.t1());
  };
  t.q_claims = Law::exponential(eta - c);
  t.q_mixing1 = Law::gamma(b2, a);
  t.ell = 2;
  t.q_premium_direction = Monotone::Increasing;  // p(Q,theta) = theta/(d(eta-c))
  t.xi_direction = b2 < b1 ? Monotone::Increasing : Monotone::Decreasing;
  return t;
}

}  // namespace

Tilt example2_tilt(const RiskModel& model, double k, double eta, double c,
                   double d, double b1, double b2, double a) {
  require(c > 0.0, "example2 tilt requires c > 0");
  require(b2 < b1, "example2 tilt requires b2 < b1");
  return example2_common(model, k, eta, c, d, b1, b2, a, "example2");
}

Tilt example2_cou_tilt(const RiskModel& model, double k, double eta, double d,
                       double b1, double b2, double a) {
  require(b2 > b1 * k / d,
          "ordering-reversal parameterization requires b2 > b1 k / d");
  return example2_common(model, k, eta, 0.0, d, b1, b2, a, "example2cou");
}

Tilt wang_tilt(const RiskModel& model, double c) {
  require(c > 1.0, "wang tilt requires c > 1");
  require(has_density(model.claims),
          "wang tilt requires absolutely continuous claims");
  Tilt t;
  t.name = "wang";
  t.params["c"] = c;
  Law claims = model.claims;
  double expo = 1.0 / c - 1.0;
  double lc = std::log(c);
  t.gamma = [claims, expo, lc](double x) {
    return -lc + expo * log_survival(claims, x);
  };
  t.rho = identity_rho(model);
  t.alpha_defect = zero_theta_fn();
  t.xi = one_theta_fn();
  // closed-form Q claims where the survival power stays in the family
  if (const auto* u = model.claims.get_if<laws::Uniform>()) {
    if (u->lo == 0.0 && u->hi == 1.0) t.q_claims = Law::beta(1.0, 1.0 / c);
  } else if (const auto* e = model.claims.get_if<laws::Exponential>()) {
    t.q_claims = Law::exponential(e->rate / c);
  }
  t.q_mixing1 = model.mixing1;
  t.q_mixing2 = model.mixing2;
  t.xi_envelope = 1.0;
  t.ell = 2;
  if (model.kernel.family() == Kernel::Family::ExpTheta)
    t.q_premium_direction = Monotone::Increasing;
  return t;
}

Tilt exp_mixing_xi(const RiskModel& model, double r) {
  Tilt t = identity_tilt(model);
  return with_exp_mixing_xi(model, std::move(t), r);
}

Tilt with_exp_mixing_xi(const RiskModel& model, Tilt tilt, double r) {
  require(r > 0.0, "exponential mixing tilt requires r > 0");
  require(model.dim() == 1,
          "exponential mixing tilt is defined for one-dimensional mixing");
  double z = mgf(model.mixing1, r);  // throws if E[e^{r Theta}] diverges
  double log_z = std::log(z);
  tilt.xi = [r, log_z](const Theta& th) {
    return std::exp(r * th.t1() - log_z);
  };
  tilt.q_mixing1 = exp_tilt_closed(model.mixing1, r, log_z);
  if (!tilt.q_mixing1) tilt.xi_envelope = std::nullopt;
  tilt.xi_direction = Monotone::Increasing;
  tilt.name += tilt.name.empty() ? "exp_xi" : "+exp_xi";
  tilt.params["r"] = r;
  return tilt;
}

Tilt with_alpha_offset(Tilt tilt, double delta) {
  auto base = tilt.alpha_defect;
  tilt.alpha_defect = [base, delta](const Theta& th) {
    return (base ? base(th) : 0.0) + delta;
  };
  tilt.name += "+alpha_offset";
  tilt.params["alpha_offset"] = delta;
  return tilt;
}

Tilt with_xi_scale(Tilt tilt, double scale) {
  require(scale > 0.0, "xi scale must be positive");
  auto base = tilt.xi;
  tilt.xi = [base, scale](const Theta& th) { return scale * base(th); };
  tilt.name += "+xi_scale";
  tilt.params["xi_scale"] = scale;
  return tilt;
}

}  // namespace cmrp
