#ifndef CMRP_DIAGNOSTICS_HPP
#define CMRP_DIAGNOSTICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "cmrp/model.hpp"
#include "cmrp/stats.hpp"
#include "cmrp/tilt.hpp"

namespace cmrp {

/// MC check of E_P[M_t(Theta)] = 1 at each time. Paths are simulated to
/// max(times) and the density is evaluated at every requested time.
std::vector<CheckReport> martingale_unit_mean(const RiskModel& model,
                                              const Tilt& tilt,
                                              std::span<const double> times,
                                              std::size_t n, std::uint64_t seed,
                                              unsigned threads = 0,
                                              double z_threshold = kDefaultZ);

/// Drift check E[S_t - t c(Theta)] against 0 under whichever measure the
/// model represents. With the model's own conditional premium density and
/// an exponential kernel the drift vanishes; an unconditional rate under
/// non-degenerate mixing leaves a positive Jensen gap.
std::vector<CheckReport> compensated_drift(
    const RiskModel& model, const std::function<double(const Theta&)>& premium,
    std::span<const double> times, std::size_t n, std::uint64_t seed,
    unsigned threads = 0, double z_threshold = kDefaultZ);

/// Conditional variant: same drift check at fixed theta points, realized
/// by degenerate-mixing runs.
std::vector<CheckReport> compensated_drift_conditional(
    const RiskModel& model, const std::function<double(const Theta&)>& premium,
    std::span<const Theta> thetas, double t, std::size_t n, std::uint64_t seed,
    unsigned threads = 0, double z_threshold = kDefaultZ);

/// Long-run ratio check: per path |S_t/t - p(P, theta)| against the
/// path's own realized theta, at t and 2t. The 95th percentile of the
/// error must shrink when t doubles.
struct SllnReport {
  double t1 = 0.0;
  double t2 = 0.0;
  double p95_t1 = 0.0;
  double p95_t2 = 0.0;
  bool shrank = false;
  std::size_t n = 0;
};

SllnReport slln_ratio(const RiskModel& model, double t_large, std::size_t n,
                      std::uint64_t seed, unsigned threads = 0);

/// Mean/variance of S_t against the closed forms obtained from Wald's
/// identities (exponential kernel required; targets by quadrature over
/// the mixing law).
struct WaldReports {
  CheckReport mean_check;
  CheckReport var_check;
};

WaldReports wald_identities(const RiskModel& model, double t, std::size_t n,
                            std::uint64_t seed, unsigned threads = 0,
                            double z_threshold = kDefaultZ);

/// Exact association inequality on a finite support:
/// E[1_A f g] >= (1/P(A)) E[1_A f] E[1_A g] for same monotonicity,
/// reversed for opposite monotonicity. Both sides are enumerated exactly;
/// no tolerance is involved.
struct AssociationReport {
  double lhs = 0.0;       // P(A) * E[1_A f g]
  double rhs = 0.0;       // E[1_A f] * E[1_A g]
  double p_event = 0.0;
  bool same_direction = false;
  bool holds = false;
};

AssociationReport association_inequality(
    const Law& finite_z, const std::function<double(double)>& f,
    const std::function<double(double)>& g, Monotone f_dir, Monotone g_dir,
    std::span<const std::size_t> event_atoms);

/// Weighted-P versus direct-Q distribution check on (N_t, S_t).
struct PathlawReport {
  WeightedKsReport count_ks;
  WeightedKsReport aggregate_ks;
  double ess = 0.0;
  bool inconclusive = false;
};

PathlawReport pathlaw_equivalence(const RiskModel& model, const Tilt& tilt,
                                  double t, std::size_t n, std::uint64_t seed,
                                  unsigned threads = 0);

}  // namespace cmrp

#endif  // CMRP_DIAGNOSTICS_HPP
