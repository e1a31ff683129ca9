#include "cmrp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmrp/errors.hpp"
#include "cmrp/parallel.hpp"

namespace cmrp {

namespace {

double max_time(std::span<const double> times) {
  double m = 0.0;
  for (double t : times) {
    if (!(t > 0.0)) throw ConfigError("check times must be positive");
    m = std::max(m, t);
  }
  return m;
}

bool is_monotone(const std::vector<double>& vals, Monotone dir) {
  for (std::size_t i = 1; i < vals.size(); ++i) {
    if (dir == Monotone::Increasing && vals[i] < vals[i - 1]) return false;
    if (dir == Monotone::Decreasing && vals[i] > vals[i - 1]) return false;
  }
  return true;
}

}  // namespace

std::vector<CheckReport> martingale_unit_mean(const RiskModel& model,
                                              const Tilt& tilt,
                                              std::span<const double> times,
                                              std::size_t n, std::uint64_t seed,
                                              unsigned threads,
                                              double z_threshold) {
  if (n < 2) throw ConfigError("martingale check needs n >= 2 paths");
  double horizon = max_time(times);
  std::vector<std::vector<double>> vals(times.size(),
                                        std::vector<double>(n, 0.0));
  std::vector<char> truncated(n, 0);
  parallel_for(n, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    try {
      Path p = simulate_path(model, Stop::at_horizon(horizon), rng);
      for (std::size_t k = 0; k < times.size(); ++k)
        vals[k][i] = std::exp(log_density(model, tilt, p, times[k]));
    } catch (const RunawayError&) {
      truncated[i] = 1;
      for (std::size_t k = 0; k < times.size(); ++k)
        vals[k][i] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  std::size_t n_trunc = static_cast<std::size_t>(
      std::count(truncated.begin(), truncated.end(), 1));
  if (n_trunc == n)
    throw InconclusiveError("martingale check: every path hit the cap");

  std::vector<CheckReport> out;
  out.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::vector<double>& v = vals[k];
    if (n_trunc > 0)
      v.erase(std::remove_if(v.begin(), v.end(),
                             [](double x) { return std::isnan(x); }),
              v.end());
    Estimate est = make_estimate(v, seed, n_trunc);
    out.push_back(
        make_check("martingale_unit_mean", times[k], 1.0, est, z_threshold));
  }
  return out;
}

std::vector<CheckReport> compensated_drift(
    const RiskModel& model, const std::function<double(const Theta&)>& premium,
    std::span<const double> times, std::size_t n, std::uint64_t seed,
    unsigned threads, double z_threshold) {
  if (n < 2) throw ConfigError("drift check needs n >= 2 paths");
  double horizon = max_time(times);
  std::vector<std::vector<double>> vals(times.size(),
                                        std::vector<double>(n, 0.0));
  parallel_for(n, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    Path p = simulate_path(model, Stop::at_horizon(horizon), rng);
    double c = premium(p.theta);
    for (std::size_t k = 0; k < times.size(); ++k)
      vals[k][i] = aggregate_at(p, times[k]) - times[k] * c;
  });
  std::vector<CheckReport> out;
  out.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    Estimate est = make_estimate(vals[k], seed);
    out.push_back(
        make_check("compensated_drift", times[k], 0.0, est, z_threshold));
  }
  return out;
}

std::vector<CheckReport> compensated_drift_conditional(
    const RiskModel& model, const std::function<double(const Theta&)>& premium,
    std::span<const Theta> thetas, double t, std::size_t n, std::uint64_t seed,
    unsigned threads, double z_threshold) {
  std::vector<CheckReport> out;
  out.reserve(thetas.size());
  std::uint64_t stratum = 0;
  for (const Theta& th : thetas) {
    RiskModel cond = model;
    cond.mixing1 = Law::degenerate(th.t1());
    if (model.dim() == 2) cond.mixing2 = Law::degenerate(th.t2());
    std::vector<double> times{t};
    auto reports = compensated_drift(cond, premium, times, n,
                                     seed + 0x9E37 * (++stratum), threads,
                                     z_threshold);
    reports[0].name = "compensated_drift_conditional";
    out.push_back(reports[0]);
  }
  return out;
}

SllnReport slln_ratio(const RiskModel& model, double t_large, std::size_t n,
                      std::uint64_t seed, unsigned threads) {
  if (!(t_large > 0.0)) throw ConfigError("slln time must be positive");
  SllnReport rep;
  rep.t1 = t_large;
  rep.t2 = 2.0 * t_large;
  rep.n = n;
  std::vector<double> err1(n), err2(n);
  double ex = mean(model.claims);
  parallel_for(n, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    Path p = simulate_path(model, Stop::at_horizon(2.0 * t_large), rng);
    double target = ex / model.conditional_mean_interarrival(p.theta);
    err1[i] = std::fabs(aggregate_at(p, t_large) / t_large - target);
    err2[i] =
        std::fabs(aggregate_at(p, 2.0 * t_large) / (2.0 * t_large) - target);
  });
  rep.p95_t1 = empirical_quantile(err1, 0.95);
  rep.p95_t2 = empirical_quantile(err2, 0.95);
  rep.shrank = rep.p95_t2 < rep.p95_t1;
  return rep;
}

WaldReports wald_identities(const RiskModel& model, double t, std::size_t n,
                            std::uint64_t seed, unsigned threads,
                            double z_threshold) {
  bool exp_kernel =
      model.kernel.family() == Kernel::Family::ExpTheta ||
      (model.kernel.family() == Kernel::Family::GammaTheta &&
       model.kernel.shape() == 1.0);
  if (!exp_kernel)
    throw UnsupportedError(
        "wald targets are closed-form only for exponential kernels");

  // targets by quadrature over the mixing law
  double g_mean =
      expect_theta(model, [](const Theta& th) { return th.t1(); }).value;
  double g2 = expect_theta(model, [](const Theta& th) {
                return th.t1() * th.t1();
              }).value;
  double g_var = g2 - g_mean * g_mean;
  double ex = mean(model.claims);
  double vx = variance(model.claims);
  double target_mean = t * g_mean * ex;
  double en = t * g_mean;
  double vn = t * g_mean + t * t * g_var;
  double target_var = en * vx + vn * ex * ex;

  std::vector<double> s(n);
  parallel_for(n, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    Path p = simulate_path(model, Stop::at_horizon(t), rng);
    s[i] = aggregate_at(p, t);
  });
  Estimate mean_est = make_estimate(s, seed);

  // variance estimate with its asymptotic standard error
  double m = mean_est.value;
  std::vector<double> d2(n), d4(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = s[i] - m;
    d2[i] = d * d;
    d4[i] = d * d * d * d;
  }
  double dn = static_cast<double>(n);
  double var_hat = pairwise_sum(d2) / (dn - 1.0);
  double m4 = pairwise_sum(d4) / dn;
  Estimate var_est;
  var_est.value = var_hat;
  var_est.stderr_ = std::sqrt(std::max(m4 - var_hat * var_hat, 0.0) / dn);
  var_est.n = n;
  var_est.seed = seed;

  WaldReports out;
  out.mean_check = make_check("wald_mean", t, target_mean, mean_est,
                              z_threshold);
  out.var_check = make_check("wald_var", t, target_var, var_est, z_threshold);
  return out;
}

AssociationReport association_inequality(
    const Law& finite_z, const std::function<double(double)>& f,
    const std::function<double(double)>& g, Monotone f_dir, Monotone g_dir,
    std::span<const std::size_t> event_atoms) {
  const auto* fd = finite_z.get_if<laws::FiniteDiscrete>();
  if (!fd)
    throw UnsupportedError(
        "association inequality is enumerated on finite-discrete laws");
  if (f_dir == Monotone::None || g_dir == Monotone::None)
    throw DomainError("declare the monotonicity of both functions");

  // verify the declared monotonicity on the (sorted) support
  std::vector<double> fv(fd->atoms.size()), gv(fd->atoms.size());
  for (std::size_t i = 0; i < fd->atoms.size(); ++i) {
    fv[i] = f(fd->atoms[i]);
    gv[i] = g(fd->atoms[i]);
  }
  if (!is_monotone(fv, f_dir) || !is_monotone(gv, g_dir))
    throw DomainError("function not monotone in the declared direction");

  AssociationReport rep;
  rep.same_direction = f_dir == g_dir;
  double pa = 0.0, efg = 0.0, ef = 0.0, eg = 0.0;
  for (std::size_t idx : event_atoms) {
    if (idx >= fd->atoms.size())
      throw DomainError("event atom index out of range");
    double w = fd->weights[idx];
    pa += w;
    efg += w * fv[idx] * gv[idx];
    ef += w * fv[idx];
    eg += w * gv[idx];
  }
  if (!(pa > 0.0)) throw DomainError("event has zero probability");
  rep.p_event = pa;
  // compare P(A) E[1_A f g] with E[1_A f] E[1_A g]: division-free form
  rep.lhs = pa * efg;
  rep.rhs = ef * eg;
  rep.holds = rep.same_direction ? rep.lhs >= rep.rhs : rep.lhs <= rep.rhs;
  return rep;
}

PathlawReport pathlaw_equivalence(const RiskModel& model, const Tilt& tilt,
                                  double t, std::size_t n, std::uint64_t seed,
                                  unsigned threads) {
  if (n < 2) throw ConfigError("pathlaw check needs n >= 2 paths per side");
  RiskModel q = q_model(model, tilt);
  std::vector<double> pn(n), ps(n), w(n), qn(n), qs(n);
  parallel_for(n, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    Path p = simulate_path(model, Stop::at_horizon(t), rng);
    pn[i] = static_cast<double>(count_at(p, t));
    ps[i] = aggregate_at(p, t);
    w[i] = std::exp(log_density(model, tilt, p, t));
  });
  parallel_for(n, threads, [&](std::size_t i) {
    RngStream rng(seed, n + i);
    Path p = simulate_path(q, Stop::at_horizon(t), rng);
    qn[i] = static_cast<double>(count_at(p, t));
    qs[i] = aggregate_at(p, t);
  });

  PathlawReport rep;
  rep.count_ks = weighted_ks_permutation(pn, w, qn, seed ^ 0xC0117D5Aull);
  rep.aggregate_ks = weighted_ks_permutation(ps, w, qs, seed ^ 0xA66D15AAull);
  rep.ess = rep.count_ks.ess;
  rep.inconclusive = rep.count_ks.inconclusive || rep.aggregate_ks.inconclusive;
  return rep;
}

}  // namespace cmrp
