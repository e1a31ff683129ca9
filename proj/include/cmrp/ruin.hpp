#ifndef CMRP_RUIN_HPP
#define CMRP_RUIN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cmrp/model.hpp"
#include "cmrp/stats.hpp"
#include "cmrp/tilt.hpp"

namespace cmrp {

/// Reserve-process problem description: initial reserve, premium rate as
/// a function of theta, and budgets.
struct RuinSpec {
  double u = 1.0;
  std::function<double(const Theta&)> premium;
  std::size_t max_claims = 100'000;
  std::size_t n_paths = 0;
  std::optional<double> horizon;  // crude estimator only

  void validate(const RiskModel& model) const;
};

/// R^u_t = u + c(theta) t - S_t.
double reserve_at(const Path& path, const RuinSpec& spec, double t);

/// First claim epoch at which the reserve drops strictly below zero.
/// Since the premium rate is positive the reserve only falls at claim
/// instants, so the ruin time is always an arrival epoch.
struct RuinTime {
  bool ruined = false;
  double tau = 0.0;
  std::size_t claim_index = 0;  // 1-based index of the ruining claim
};

RuinTime ruin_time(const Path& path, const RuinSpec& spec);

enum class NpcClass { ViolatedAs, SatisfiedAs, Mixed };

/// Net-profit margins c(theta) - p(P, theta) over the mixing quantile
/// grid, with the almost-sure classification the margins imply.
struct NetProfitReport {
  NpcClass cls = NpcClass::Mixed;
  double min_margin = 0.0;
  double max_margin = 0.0;
  struct Row {
    Theta theta;
    double premium;
    double premium_density;
    double margin;
  };
  std::vector<Row> rows;
};

NetProfitReport net_profit_report(const RiskModel& model,
                                  const RuinSpec& spec);

/// Monte Carlo ruin estimate.
struct RuinResult {
  Estimate est;
  std::size_t ruined = 0;
  std::size_t truncated = 0;
  bool lower_bound = false;  // truncated paths contribute zero
};

/// Crude finite-horizon estimator under P: the ruined fraction by the
/// horizon. A lower bound on the infinite-horizon probability.
RuinResult ruin_prob_crude(const RiskModel& model, const RuinSpec& spec,
                           std::uint64_t seed, unsigned threads = 0);

/// Infinite-horizon estimator by simulation under the measure-changed
/// model, where ruin is almost sure; each ruined path contributes the
/// inverse likelihood ratio at its ruin time and truncated paths
/// contribute zero (lower-bound semantics). The premium rate is the
/// Q conditional premium density, computed from the tilt; this identity
/// is what makes the estimator exact, so it is enforced rather than
/// taken from the caller.
RuinResult ruin_prob_is(const RiskModel& model, const Tilt& tilt, double u,
                        std::size_t n_paths, std::size_t max_claims,
                        std::uint64_t seed, unsigned threads = 0);

/// Classical closed form for a compound Poisson reserve with exponential
/// claims: psi(u) = (lambda/(c eta)) exp(-(eta - lambda/c) u) when the
/// net profit condition holds, 1 otherwise. Verification oracle.
double cramer_lundberg_ruin(double lambda, double eta, double c, double u);

/// Mixture of the closed form over the mixing law, by quadrature.
/// Requires an exponential kernel and exponential claims.
QuadResult cramer_lundberg_mixed(const RiskModel& model,
                                 const std::function<double(const Theta&)>& premium,
                                 double u);

}  // namespace cmrp

#endif  // CMRP_RUIN_HPP
