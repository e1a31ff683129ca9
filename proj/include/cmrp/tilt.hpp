#ifndef CMRP_TILT_HPP
#define CMRP_TILT_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "cmrp/model.hpp"

namespace cmrp {

enum class Monotone { None, Increasing, Decreasing };

/// The change-of-measure triple (gamma, rho, xi).
///
/// gamma is the log claim-density ratio, rho the target exponential
/// interarrival rate, xi the mixing-density ratio. The consistency
/// condition alpha = ln rho + ln E[W1|theta] is stored structurally as
/// alpha_defect = alpha - ln rho - ln E[W1|theta], identically zero for
/// every valid tilt; mutation helpers perturb it to make density errors
/// observable. Closed-form Q laws, when known, make Q-sampling exact and
/// give the premium computation an independent second route.
struct Tilt {
  std::string name = "custom";
  std::function<double(double)> gamma;
  std::function<double(const Theta&)> rho;
  std::function<double(const Theta&)> alpha_defect;
  std::function<double(const Theta&)> xi;

  std::optional<Law> q_claims;
  std::optional<Law> q_mixing1;
  std::optional<Law> q_mixing2;

  // rejection envelopes for generic tilts without closed forms
  std::optional<double> claim_envelope;  // >= sup exp(gamma)
  std::optional<double> xi_envelope;     // >= sup xi

  int ell = 2;
  Monotone q_premium_direction = Monotone::None;
  Monotone xi_direction = Monotone::None;

  std::map<std::string, double> params;

  /// alpha(theta) = ln rho + ln E[W1|theta] + defect.
  double alpha(const RiskModel& model, const Theta& theta) const;
};

/// alpha(theta) from a rate function, per the consistency condition.
double alpha_from_rho(const RiskModel& model,
                      const std::function<double(const Theta&)>& rho,
                      const Theta& theta);

/// Inverse map: rho(theta) = exp(alpha) / E[W1|theta].
double rho_from_alpha(const RiskModel& model, double alpha,
                      const Theta& theta);

/// Quadrature (or Monte Carlo fallback) verification of the tilt's
/// defining moment conditions.
struct TiltValidation {
  double e_exp_gamma = 0.0;     // E[e^gamma(X1)], target 1
  double e_exp_gamma_err = 0.0;
  double e_xl_gamma = 0.0;      // E[X1^ell e^gamma(X1)], must be finite
  double e_xl_gamma_err = 0.0;
  double e_xi = 0.0;            // E[xi(Theta)], target 1
  double e_xi_err = 0.0;
  double e_xi_rho_l = 0.0;      // E[xi(Theta) rho(Theta)^ell], must be finite
  double e_xi_rho_l_err = 0.0;
  int ell = 2;
  double tol = 1e-6;
  bool used_mc = false;
  bool gamma_ok = false;
  bool xi_ok = false;
  bool moments_finite = false;
  bool pass = false;
};

TiltValidation validate_tilt(const RiskModel& model, const Tilt& tilt,
                             double tol = 1e-6, double mc_tol = 1e-3);

/// ln M_t(theta) for one path: the log likelihood ratio dQ/dP on the
/// information up to t, accumulated in compensated summation. Terms tied
/// by the consistency condition cancel structurally, so the identity tilt
/// returns exactly 0.
double log_density(const RiskModel& model, const Tilt& tilt, const Path& path,
                   double t);

/// Same quantity assembled literally from the product form
/// xi * e^{S_t^beta - rho (t - T_N)} (rho E[W|theta])^{-N} / (1 - K(resid))
/// * prod dExp(rho)/dK(W_j). Kept as an independent algebraic route;
/// agreement with log_density guards transcription of the density.
double log_density_literal(const RiskModel& model, const Tilt& tilt,
                           const Path& path, double t);

/// The model under Q: mixing reweighted by xi, kernel Exp(rho(theta)),
/// claims reweighted by e^gamma. Sampling never evaluates the density;
/// non-closed-form parts require rejection envelopes.
RiskModel q_model(const RiskModel& model, const Tilt& tilt);

// ---- builders ----

/// No-op change of measure (gamma = 0, xi = 1, rho = 1/E[W1|theta]).
Tilt identity_tilt(const RiskModel& model);

/// Esscher claim tilt: gamma(x) = c x - ln E[exp(c X1)].
Tilt esscher_gamma(const RiskModel& model, double c);

/// Hyperexponential-kernel / gamma-claims tilt (two-point mixing space,
/// claims Gamma(zeta,2), requires c > 2): gamma(x) = ln(E[X1]/(2c)) - ln x
/// + 2(c-1)x/(c E[X1]), alpha = 0, xi = 1.
Tilt example1_tilt(const RiskModel& model, double zeta, double c);

/// Gamma-kernel tilt with exponential claims and gamma mixing: requires
/// c < eta, d < k, b2 < b1. rho = theta/d, gamma = ln(1 - c/eta) + c x,
/// xi = (b2/b1)^a exp(-(b2-b1) theta).
Tilt example2_tilt(const RiskModel& model, double k, double eta, double c,
                   double d, double b1, double b2, double a);

/// The ordering-reversal parameterization: c = 0 and b2 > b1 k / d.
Tilt example2_cou_tilt(const RiskModel& model, double k, double eta, double d,
                       double b1, double b2, double a);

/// Risk-adjusted premium tilt (requires c > 1):
/// gamma(x) = -ln c + (1/c - 1) ln survival(x).
Tilt wang_tilt(const RiskModel& model, double c);

/// Exponential mixing tilt xi(theta) = e^{r theta} / E[e^{r Theta}] with
/// identity claim/kernel parts.
Tilt exp_mixing_xi(const RiskModel& model, double r);

/// Swap the xi part of an existing tilt for the exponential mixing tilt.
Tilt with_exp_mixing_xi(const RiskModel& model, Tilt tilt, double r);

// ---- mutations (for sensitivity tests; deliberately invalid tilts) ----

Tilt with_alpha_offset(Tilt tilt, double delta);
Tilt with_xi_scale(Tilt tilt, double scale);

}  // namespace cmrp

#endif  // CMRP_TILT_HPP
