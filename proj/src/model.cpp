#include "cmrp/model.hpp"

#include <algorithm>
#include <cmath>

#include "cmrp/errors.hpp"

namespace cmrp {

Kernel Kernel::exp_theta() {
  Kernel k;
  k.family_ = Family::ExpTheta;
  k.label_ = "exp_theta";
  return k;
}

Kernel Kernel::gamma_theta(double shape) {
  if (!(shape > 0.0)) throw ConfigError("kernel shape must be positive");
  Kernel k;
  k.family_ = Family::GammaTheta;
  k.shape_ = shape;
  k.label_ = "gamma_theta";
  return k;
}

Kernel Kernel::hyper_exp_half() {
  Kernel k;
  k.family_ = Family::HyperExpHalf;
  k.label_ = "hyperexp_half";
  return k;
}

Kernel Kernel::exp_of_rate(std::function<double(const Theta&)> rate,
                           std::string label) {
  Kernel k;
  k.family_ = Family::ExpOfRate;
  k.rate_ = std::move(rate);
  k.label_ = std::move(label);
  return k;
}

Law Kernel::at(const Theta& theta) const {
  switch (family_) {
    case Family::ExpTheta:
      return Law::exponential(theta.t1());
    case Family::GammaTheta:
      return Law::gamma(theta.t1(), shape_);
    case Family::HyperExpHalf:
      return Law::hyper_exponential({0.5, 0.5},
                                    {1.0 / theta.t1(), 1.0 / theta.t2()});
    case Family::ExpOfRate:
      return Law::exponential(rate_(theta));
  }
  throw ConfigError("unknown kernel family");
}

std::optional<double> Kernel::exp_rate_at(const Theta& theta) const {
  switch (family_) {
    case Family::ExpTheta:
      return theta.t1();
    case Family::GammaTheta:
      return shape_ == 1.0 ? std::optional<double>(theta.t1()) : std::nullopt;
    case Family::ExpOfRate:
      return rate_(theta);
    case Family::HyperExpHalf:
      return std::nullopt;
  }
  return std::nullopt;
}

double Kernel::mean_at(const Theta& theta) const {
  switch (family_) {
    case Family::ExpTheta:
      return 1.0 / theta.t1();
    case Family::GammaTheta:
      return shape_ / theta.t1();
    case Family::HyperExpHalf:
      return 0.5 * (theta.t1() + theta.t2());
    case Family::ExpOfRate:
      return 1.0 / rate_(theta);
  }
  throw ConfigError("unknown kernel family");
}

Theta RiskModel::sample_theta(RngStream& rng) const {
  Theta th;
  th.v1 = sample(mixing1, rng);
  if (mixing2) {
    th.v2 = sample(*mixing2, rng);
    th.dim = 2;
  }
  return th;
}

double RiskModel::conditional_mean_interarrival(const Theta& theta) const {
  double m = kernel.mean_at(theta);
  if (!(m > 0.0) || !std::isfinite(m))
    throw ValidationError("conditional mean interarrival not positive finite");
  return m;
}

void RiskModel::validate() const {
  if (kernel.required_dim() != dim())
    throw ValidationError("kernel dimension does not match the mixing law");
  Support cs = support(claims);
  if (cs.lo < 0.0)
    throw ValidationError("claims must be supported on (0, inf)");
  if (const auto* d = claims.get_if<laws::Degenerate>()) {
    if (d->point <= 0.0) throw ValidationError("claims mass at 0 forbidden");
  }
  if (const auto* f = claims.get_if<laws::FiniteDiscrete>()) {
    if (f->atoms.front() <= 0.0)
      throw ValidationError("claims mass at 0 forbidden");
  }
  // kernel means on a mixing quantile grid
  const int kGrid = 16;
  for (int i = 0; i < kGrid; ++i) {
    double q = 0.001 + (0.999 - 0.001) * i / (kGrid - 1);
    Theta th;
    th.v1 = quantile(mixing1, q);
    if (mixing2) {
      th.v2 = quantile(*mixing2, q);
      th.dim = 2;
    }
    double m = kernel.mean_at(th);
    if (!(m > 0.0) || !std::isfinite(m))
      throw ValidationError("kernel mean not positive finite on the grid");
  }
}

Stop Stop::at_horizon(double t) {
  if (!(t > 0.0)) throw ConfigError("horizon must be positive");
  return Stop{Rule::Horizon, t, 0};
}

Stop Stop::at_claim_count(std::size_t n) {
  if (n == 0) throw ConfigError("claim count must be positive");
  return Stop{Rule::ClaimCount, 0.0, n};
}

Path simulate_path(const RiskModel& model, const Stop& stop, RngStream& rng) {
  Path p;
  p.theta = model.sample_theta(rng);
  Law kernel_law = model.kernel.at(p.theta);
  double t = 0.0;
  if (stop.rule == Stop::Rule::Horizon) {
    p.horizon = stop.horizon;
    for (;;) {
      double w = sample(kernel_law, rng);
      double x = sample(model.claims, rng);
      t += w;
      p.arrivals.push_back(t);
      p.claims.push_back(x);
      if (t > stop.horizon) break;  // overshoot arrival retained
      if (p.arrivals.size() >= kRunawayCap)
        throw RunawayError("claim-count cap exceeded before the horizon");
    }
  } else {
    p.count_bounded = true;
    if (stop.count > kRunawayCap)
      throw RunawayError("requested claim count exceeds the cap");
    p.arrivals.reserve(stop.count);
    p.claims.reserve(stop.count);
    for (std::size_t j = 0; j < stop.count; ++j) {
      double w = sample(kernel_law, rng);
      double x = sample(model.claims, rng);
      t += w;
      p.arrivals.push_back(t);
      p.claims.push_back(x);
    }
    p.horizon = t;
  }
  return p;
}

std::size_t count_at(const Path& path, double t) {
  if (t < 0.0 || t > path.coverage() * (1.0 + 1e-15))
    throw OutOfWindowError("time outside the simulated window");
  auto it = std::upper_bound(path.arrivals.begin(), path.arrivals.end(), t);
  return static_cast<std::size_t>(it - path.arrivals.begin());
}

double aggregate_at(const Path& path, double t) {
  std::size_t n = count_at(path, t);
  // compensated left-to-right accumulation
  double sum = 0.0, c = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double y = path.claims[j] - c;
    double s = sum + y;
    c = (s - sum) - y;
    sum = s;
  }
  return sum;
}

QuadResult expect_theta(const RiskModel& model,
                        const std::function<double(const Theta&)>& h,
                        double abs_tol) {
  if (model.dim() == 1) {
    return expect(
        model.mixing1,
        [&h](double t1) {
          Theta th;
          th.v1 = t1;
          return h(th);
        },
        abs_tol);
  }
  double inner_err = 0.0;
  bool inner_conv = true;
  QuadResult outer = expect(
      model.mixing1,
      [&](double t1) {
        QuadResult r = expect(
            *model.mixing2,
            [&h, t1](double t2) {
              Theta th;
              th.v1 = t1;
              th.v2 = t2;
              th.dim = 2;
              return h(th);
            },
            abs_tol);
        inner_err = std::max(inner_err, r.error);
        inner_conv = inner_conv && r.converged;
        return r.value;
      },
      abs_tol);
  outer.error += inner_err;
  outer.converged = outer.converged && inner_conv;
  return outer;
}

std::vector<Theta> theta_grid(const RiskModel& model, std::size_t per_dim) {
  auto levels = [per_dim](const Law& law) {
    std::vector<double> pts(per_dim);
    for (std::size_t i = 0; i < per_dim; ++i) {
      double q =
          0.001 + (0.999 - 0.001) * static_cast<double>(i) /
                      static_cast<double>(per_dim > 1 ? per_dim - 1 : 1);
      pts[i] = quantile(law, q);
    }
    return pts;
  };
  std::vector<Theta> grid;
  std::vector<double> g1 = levels(model.mixing1);
  if (model.dim() == 1) {
    grid.reserve(per_dim);
    for (double v : g1) {
      Theta th;
      th.v1 = v;
      grid.push_back(th);
    }
    return grid;
  }
  std::vector<double> g2 = levels(*model.mixing2);
  grid.reserve(per_dim * per_dim);
  for (double v1 : g1)
    for (double v2 : g2) {
      Theta th;
      th.v1 = v1;
      th.v2 = v2;
      th.dim = 2;
      grid.push_back(th);
    }
  return grid;
}

}  // namespace cmrp
