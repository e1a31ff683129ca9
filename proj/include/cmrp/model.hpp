#ifndef CMRP_MODEL_HPP
#define CMRP_MODEL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cmrp/law.hpp"
#include "cmrp/rng.hpp"

namespace cmrp {

/// Point of the mixing parameter space D (one- or two-dimensional).
struct Theta {
  double v1 = 0.0;
  double v2 = 0.0;
  int dim = 1;

  double t1() const { return v1; }
  double t2() const { return v2; }
};

/// Interarrival kernel theta -> K(theta). Named families keep models
/// serializable; exp_of_rate carries an arbitrary rate function and is
/// used for measure-changed models built at runtime.
class Kernel {
 public:
  enum class Family { ExpTheta, GammaTheta, HyperExpHalf, ExpOfRate };

  static Kernel exp_theta();
  static Kernel gamma_theta(double shape);
  static Kernel hyper_exp_half();
  static Kernel exp_of_rate(std::function<double(const Theta&)> rate,
                            std::string label);

  Family family() const { return family_; }
  double shape() const { return shape_; }
  int required_dim() const { return family_ == Family::HyperExpHalf ? 2 : 1; }

  Law at(const Theta& theta) const;
  double mean_at(const Theta& theta) const;
  /// Exponential rate of K(theta) when the kernel is exponential
  /// (including gamma with shape 1); nullopt otherwise.
  std::optional<double> exp_rate_at(const Theta& theta) const;
  const std::string& label() const { return label_; }

 private:
  Family family_ = Family::ExpTheta;
  double shape_ = 1.0;
  std::function<double(const Theta&)> rate_;
  std::string label_;
};

/// The model triple: mixing law of Theta, interarrival kernel, claim law.
/// Two-dimensional parameter spaces are products of independent
/// one-dimensional mixing laws.
struct RiskModel {
  Law mixing1 = Law::degenerate(1.0);
  std::optional<Law> mixing2;
  Kernel kernel = Kernel::exp_theta();
  Law claims = Law::exponential(1.0);

  int dim() const { return mixing2 ? 2 : 1; }
  Theta sample_theta(RngStream& rng) const;
  double conditional_mean_interarrival(const Theta& theta) const;

  /// Checks structural invariants: kernel dimension matches the mixing,
  /// claims have no mass at or below zero, kernel means are positive and
  /// finite on a mixing quantile grid. Throws ValidationError.
  void validate() const;
};

/// Per-path claim-count hard cap; exceeding it raises RunawayError.
inline constexpr std::size_t kRunawayCap = 10'000'000;

struct Stop {
  enum class Rule { Horizon, ClaimCount } rule;
  double horizon = 0.0;
  std::size_t count = 0;

  static Stop at_horizon(double t);
  static Stop at_claim_count(std::size_t n);
};

/// One simulated trajectory. For horizon-stopped paths the final arrival
/// is the first one past the horizon; it is retained so the residual
/// t - T_{N_t} and the survival factor are computable anywhere in the
/// window without re-simulation.
struct Path {
  Theta theta;
  std::vector<double> arrivals;  // claim epochs T_1 < T_2 < ...
  std::vector<double> claims;    // X_j, same length as arrivals
  double horizon = 0.0;          // covered window [0, horizon]
  bool count_bounded = false;    // true if stopped by claim count

  double interarrival(std::size_t j) const {
    return j == 0 ? arrivals[0] : arrivals[j] - arrivals[j - 1];
  }
  /// Largest t the path can answer queries for.
  double coverage() const { return horizon; }
};

Path simulate_path(const RiskModel& model, const Stop& stop, RngStream& rng);

/// N_t: number of claims up to and including t (right-continuous).
std::size_t count_at(const Path& path, double t);

/// S_t: aggregate claims up to t.
double aggregate_at(const Path& path, double t);

/// E[h(Theta)] over the mixing law (nested quadrature for d = 2).
QuadResult expect_theta(const RiskModel& model,
                        const std::function<double(const Theta&)>& h,
                        double abs_tol = 1e-10);

/// Quantile-spaced grid over the mixing support (levels 0.001..0.999),
/// per_dim points per dimension, full product for d = 2.
std::vector<Theta> theta_grid(const RiskModel& model,
                              std::size_t per_dim = 64);

}  // namespace cmrp

#endif  // CMRP_MODEL_HPP
