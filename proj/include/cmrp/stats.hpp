#ifndef CMRP_STATS_HPP
#define CMRP_STATS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cmrp {

/// Default two-sided z threshold for statistical pass/fail (0.1% level),
/// chosen so a suite of ~30 checks keeps a low false-failure rate.
inline constexpr double kDefaultZ = 3.29;

/// Deterministic sum: result does not depend on how the values were
/// produced across threads, only on their order in the buffer.
double pairwise_sum(std::span<const double> v);

/// Monte Carlo scalar result.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
  std::size_t truncated = 0;
  std::uint64_t seed = 0;

  double ci_lo(double z) const { return value - z * stderr_; }
  double ci_hi(double z) const { return value + z * stderr_; }
};

/// Mean/stderr of a buffer via pairwise summation (two passes).
Estimate make_estimate(std::span<const double> values, std::uint64_t seed,
                       std::size_t truncated = 0);

/// One named check of an estimate against a target value.
struct CheckReport {
  std::string name;
  double t = 0.0;
  double target = 0.0;
  Estimate est;
  double z = 0.0;
  double z_threshold = kDefaultZ;
  bool pass = false;
};

CheckReport make_check(std::string name, double t, double target,
                       const Estimate& est, double z_threshold = kDefaultZ);

/// Kolmogorov-Smirnov distance of a sample against a reference CDF.
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf);

/// Asymptotic one-sample critical value at significance alpha.
double ks_critical(std::size_t n, double alpha);

/// Weighted-vs-plain two-sample KS with permutation calibration.
///
/// The weighted empirical CDF is normalized by the sample count, not the
/// weight sum, so that an unnormalized weighting (total mass != 1) shows
/// up as a tail discrepancy instead of silently cancelling.
struct WeightedKsReport {
  double d = 0.0;          // observed statistic
  double crit = 0.0;       // permutation critical value at alpha
  double p_value = 1.0;
  double ess = 0.0;        // effective sample size of the weighted side
  bool pass = false;
  bool inconclusive = false;  // ESS below the floor
};

WeightedKsReport weighted_ks_permutation(std::span<const double> x,
                                         std::span<const double> wx,
                                         std::span<const double> y,
                                         std::uint64_t seed,
                                         int n_permutations = 199,
                                         double alpha = 0.01,
                                         double ess_floor = 100.0);

/// Empirical p-quantile (sorted copy, index ceil(p*n)-1).
double empirical_quantile(std::vector<double> values, double p);

}  // namespace cmrp

#endif  // CMRP_STATS_HPP
