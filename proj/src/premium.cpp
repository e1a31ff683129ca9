#include "cmrp/premium.hpp"

#include <algorithm>
#include <cmath>

#include "cmrp/errors.hpp"

namespace cmrp {

double conditional_premium_density(const RiskModel& model,
                                   const Theta& theta) {
  double ex = mean(model.claims);
  double ew = model.conditional_mean_interarrival(theta);
  double p = ex / ew;
  if (!(p > 0.0) || !std::isfinite(p))
    throw DomainError("conditional premium density not positive finite");
  return p;
}

QuadResult mixed_premium_density(const RiskModel& model) {
  QuadResult r = expect_theta(model, [&model](const Theta& th) {
    return conditional_premium_density(model, th);
  });
  if (!r.converged || !std::isfinite(r.value))
    throw DomainError("mixed premium density integral did not converge");
  return r;
}

QPremiumRoutes q_premium_routes(const RiskModel& model, const Tilt& tilt,
                                const Theta& theta) {
  QPremiumRoutes out;
  double rho = tilt.rho(theta);
  double defect = tilt.alpha_defect ? tilt.alpha_defect(theta) : 0.0;
  double scale = rho * std::exp(defect);  // e^{alpha} / E[W1|theta]

  QuadResult tilted = expect(model.claims, [&tilt](double x) {
    return x * std::exp(tilt.gamma(x));
  });
  if (!tilted.converged)
    throw DomainError("tilted claim integral diverged (gamma grows too fast)");
  out.p_side = scale * tilted.value;
  out.err = scale * tilted.error;

  if (tilt.q_claims) {
    out.q_side = scale * mean(*tilt.q_claims);
  } else {
    out.q_side = out.p_side;  // no independent closed form available
  }
  return out;
}

double q_premium(const RiskModel& model, const Tilt& tilt,
                 const Theta& theta) {
  QPremiumRoutes r = q_premium_routes(model, tilt, theta);
  double tol = 1e-8 * std::max(1.0, std::fabs(r.p_side));
  if (std::fabs(r.p_side - r.q_side) > tol)
    throw DomainError("q premium: P-side and Q-side routes disagree");
  return r.p_side;
}

QuadResult mixed_q_premium(const RiskModel& model, const Tilt& tilt) {
  if (tilt.q_mixing1) {
    RiskModel qm = model;
    qm.mixing1 = *tilt.q_mixing1;
    if (model.dim() == 2) {
      if (!tilt.q_mixing2)
        throw ConfigError("mixed q premium: missing second Q mixing law");
      qm.mixing2 = *tilt.q_mixing2;
    }
    return expect_theta(qm, [&model, &tilt](const Theta& th) {
      return q_premium(model, tilt, th);
    });
  }
  return expect_theta(model, [&model, &tilt](const Theta& th) {
    return tilt.xi(th) * q_premium(model, tilt, th);
  });
}

QuadResult wang_premium(const Law& claims, double c) {
  if (!(c >= 1.0)) throw ConfigError("risk-adjusted premium requires c >= 1");
  double inv_c = 1.0 / c;

  if (const auto* d = claims.get_if<laws::Degenerate>()) {
    // survival is 1 below the atom and 0 above, for every c
    return {d->point, 0.0, 1, true};
  }
  if (const auto* f = claims.get_if<laws::FiniteDiscrete>()) {
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < f->atoms.size(); ++i) {
      double surv_before = survival(claims, prev);
      acc += (f->atoms[i] - prev) * std::pow(surv_before, inv_c);
      prev = f->atoms[i];
    }
    return {acc, 0.0, f->atoms.size(), true};
  }

  auto integrand = [&claims, inv_c](double x) {
    double s = survival(claims, x);
    return s <= 0.0 ? 0.0 : std::pow(s, inv_c);
  };
  Support sup = support(claims);
  if (std::isfinite(sup.hi)) {
    QuadResult r = integrate(integrand, 0.0, sup.hi, 1e-12);
    if (!r.converged)
      throw DomainError("risk-adjusted premium quadrature did not converge");
    return r;
  }
  double cap = quantile(claims, 1.0 - 1e-12);
  QuadResult head = integrate(integrand, 0.0, cap, 1e-12);
  QuadResult tail = integrate_upper_inf(integrand, cap, 1e-12);
  if (!head.converged || !tail.converged || !std::isfinite(tail.value))
    throw DomainError("risk-adjusted premium diverges in the tail");
  head.error += tail.value + tail.error;  // tail reported as uncertainty
  head.evals += tail.evals;
  return head;
}

namespace {

Ordering classify(double gap, double err_scale) {
  if (gap > err_scale) return Ordering::StrictLess;     // p_p < p_q
  if (gap < -err_scale) return Ordering::StrictGreater;  // p_p > p_q
  return Ordering::Equal;
}

bool finite_diff_monotone(const std::vector<PremiumReport::Row>& rows,
                          Monotone dir, bool use_q) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double a = use_q ? rows[i - 1].p_q : rows[i - 1].p_p;
    double b = use_q ? rows[i].p_q : rows[i].p_p;
    if (dir == Monotone::Increasing && b < a - 1e-12) return false;
    if (dir == Monotone::Decreasing && b > a + 1e-12) return false;
  }
  return true;
}

}  // namespace

PremiumReport ordering_report(const RiskModel& model, const Tilt& tilt) {
  PremiumReport rep;
  bool all_less = true, all_greater = true, all_equal = true;
  for (const Theta& th : theta_grid(model, 64)) {
    PremiumReport::Row row;
    row.theta = th;
    row.p_p = conditional_premium_density(model, th);
    QPremiumRoutes r = q_premium_routes(model, tilt, th);
    row.p_q = r.p_side;
    row.gap = row.p_q - row.p_p;
    row.err = r.err;
    // strict verdicts only when the gap dominates quadrature error
    double scale = 10.0 * std::max(row.err, 1e-14);
    Ordering o = classify(row.gap, scale);
    all_less = all_less && o == Ordering::StrictLess;
    all_greater = all_greater && o == Ordering::StrictGreater;
    all_equal = all_equal && o == Ordering::Equal;
    rep.rows.push_back(row);
  }
  rep.pointwise = all_less ? Ordering::StrictLess
                  : all_greater ? Ordering::StrictGreater
                  : all_equal   ? Ordering::Equal
                                : Ordering::Mixed;

  QuadResult pp = mixed_premium_density(model);
  QuadResult pq = mixed_q_premium(model, tilt);
  rep.p_p_mixed = pp.value;
  rep.p_p_err = pp.error;
  rep.p_q_mixed = pq.value;
  rep.p_q_err = pq.error;
  double mixed_scale = 10.0 * std::max(pp.error + pq.error, 1e-14);
  rep.mixed = classify(rep.p_q_mixed - rep.p_p_mixed, mixed_scale);

  rep.counterexample = rep.pointwise == Ordering::StrictLess &&
                       rep.mixed == Ordering::StrictGreater;

  rep.mpcp_applicable = model.dim() == 1 &&
                        tilt.q_premium_direction != Monotone::None &&
                        tilt.q_premium_direction == tilt.xi_direction;
  if (rep.mpcp_applicable) {
    // declared monotonicity sanity-checked by finite differences
    rep.mpcp_monotone_verified =
        finite_diff_monotone(rep.rows, tilt.q_premium_direction, true);
    bool pointwise_le = rep.pointwise == Ordering::StrictLess ||
                        rep.pointwise == Ordering::Equal;
    rep.mpcp_holds = rep.mpcp_monotone_verified && pointwise_le &&
                     rep.p_p_mixed <= rep.p_q_mixed + mixed_scale;
  }
  return rep;
}

}  // namespace cmrp
