#ifndef CMRP_PREMIUM_HPP
#define CMRP_PREMIUM_HPP

#include <vector>

#include "cmrp/model.hpp"
#include "cmrp/tilt.hpp"

namespace cmrp {

/// p(P, theta) = E[X1] / E[W1 | theta].
double conditional_premium_density(const RiskModel& model, const Theta& theta);

/// p(P) = E[p(P, Theta)] by quadrature over the mixing law.
QuadResult mixed_premium_density(const RiskModel& model);

/// Both computation routes for p(Q, theta): the tilted integral on the P
/// side and the plain mean on the Q side. They must agree; q_premium
/// checks and returns the P-side value.
struct QPremiumRoutes {
  double p_side = 0.0;
  double q_side = 0.0;
  double err = 0.0;
};

QPremiumRoutes q_premium_routes(const RiskModel& model, const Tilt& tilt,
                                const Theta& theta);
double q_premium(const RiskModel& model, const Tilt& tilt, const Theta& theta);

/// p(Q) = E_Q[p(Q, Theta)], against the closed-form Q mixing when the
/// tilt provides one, otherwise xi-weighted against the P mixing.
QuadResult mixed_q_premium(const RiskModel& model, const Tilt& tilt);

/// Risk-adjusted premium pi_c = integral of survival^{1/c} over the
/// support, for c >= 1. Unbounded supports are cut at the 1 - 1e-12
/// quantile and the tail contribution is added to the error estimate.
QuadResult wang_premium(const Law& claims, double c);

enum class Ordering { StrictLess, Equal, StrictGreater, Mixed };

/// Pointwise and mixed comparison of p(P, .) and p(Q, .), with the
/// association-based sufficient condition for the mixed ordering and the
/// counterexample flag for reversals.
struct PremiumReport {
  struct Row {
    Theta theta;
    double p_p = 0.0;
    double p_q = 0.0;
    double gap = 0.0;  // p_q - p_p
    double err = 0.0;
  };
  std::vector<Row> rows;
  double p_p_mixed = 0.0, p_p_err = 0.0;
  double p_q_mixed = 0.0, p_q_err = 0.0;
  Ordering pointwise = Ordering::Mixed;
  Ordering mixed = Ordering::Mixed;
  bool counterexample = false;    // pointwise < but mixed >
  bool mpcp_applicable = false;   // d=1, declared same monotonicity
  bool mpcp_monotone_verified = false;
  bool mpcp_holds = false;        // then p(P) <= p(Q) must hold
};

PremiumReport ordering_report(const RiskModel& model, const Tilt& tilt);

}  // namespace cmrp

#endif  // CMRP_PREMIUM_HPP
