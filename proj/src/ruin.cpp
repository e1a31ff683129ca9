#include "cmrp/ruin.hpp"

#include <cassert>
#include <cmath>

#include "cmrp/errors.hpp"
#include "cmrp/parallel.hpp"

namespace cmrp {

void RuinSpec::validate(const RiskModel& model) const {
  if (!(u > 0.0)) throw ConfigError("initial reserve u must be positive");
  if (max_claims < 1) throw ConfigError("max_claims must be >= 1");
  if (!premium) throw ConfigError("premium rate function missing");
  for (const Theta& th : theta_grid(model, 16)) {
    double c = premium(th);
    if (!(c > 0.0) || !std::isfinite(c))
      throw ConfigError("premium rate must be positive on the mixing support");
  }
}

double reserve_at(const Path& path, const RuinSpec& spec, double t) {
  return spec.u + spec.premium(path.theta) * t - aggregate_at(path, t);
}

RuinTime ruin_time(const Path& path, const RuinSpec& spec) {
  RuinTime rt;
  double c = spec.premium(path.theta);
  double s = 0.0;
  std::size_t limit =
      std::min(path.arrivals.size(), spec.max_claims);
  for (std::size_t j = 0; j < limit; ++j) {
    if (!path.count_bounded && path.arrivals[j] > path.horizon) break;
    s += path.claims[j];
    if (spec.u + c * path.arrivals[j] - s < 0.0) {
      rt.ruined = true;
      rt.tau = path.arrivals[j];
      rt.claim_index = j + 1;
      return rt;
    }
  }
  return rt;
}

NetProfitReport net_profit_report(const RiskModel& model,
                                  const RuinSpec& spec) {
  if (!spec.premium) throw ConfigError("premium rate function missing");
  NetProfitReport rep;
  double ex = mean(model.claims);
  bool all_le = true, all_gt = true;
  bool first = true;
  for (const Theta& th : theta_grid(model, 64)) {
    double c = spec.premium(th);
    double p = ex / model.conditional_mean_interarrival(th);
    double margin = c - p;
    if (first) {
      rep.min_margin = rep.max_margin = margin;
      first = false;
    } else {
      rep.min_margin = std::min(rep.min_margin, margin);
      rep.max_margin = std::max(rep.max_margin, margin);
    }
    all_le = all_le && margin <= 0.0;
    all_gt = all_gt && margin > 0.0;
    rep.rows.push_back({th, c, p, margin});
  }
  // boundary margins count as violated: equality already forces ruin a.s.
  rep.cls = all_le ? NpcClass::ViolatedAs
                   : (all_gt ? NpcClass::SatisfiedAs : NpcClass::Mixed);
  return rep;
}

RuinResult ruin_prob_crude(const RiskModel& model, const RuinSpec& spec,
                           std::uint64_t seed, unsigned threads) {
  if (spec.n_paths == 0) throw ConfigError("crude ruin estimator needs paths");
  if (!spec.horizon || !(*spec.horizon > 0.0))
    throw ConfigError("crude ruin estimator needs a positive horizon");
  spec.validate(model);
  const double horizon = *spec.horizon;
  std::vector<double> ruined(spec.n_paths, 0.0);
  parallel_for(spec.n_paths, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    Path p = simulate_path(model, Stop::at_horizon(horizon), rng);
    RuinTime rt = ruin_time(p, spec);
    ruined[i] = rt.ruined ? 1.0 : 0.0;
  });
  RuinResult res;
  res.est = make_estimate(ruined, seed);
  res.ruined = static_cast<std::size_t>(
      std::llround(res.est.value * static_cast<double>(spec.n_paths)));
  res.truncated = 0;
  res.lower_bound = true;  // finite horizon only sees early ruin
  return res;
}

RuinResult ruin_prob_is(const RiskModel& model, const Tilt& tilt, double u,
                        std::size_t n_paths, std::size_t max_claims,
                        std::uint64_t seed, unsigned threads) {
  if (n_paths == 0) throw ConfigError("IS ruin estimator needs paths");
  if (!(u > 0.0)) throw ConfigError("initial reserve u must be positive");
  if (max_claims < 1) throw ConfigError("max_claims must be >= 1");
  model.validate();

  RiskModel q = q_model(model, tilt);
  // mean claim under Q; with the tilt's alpha this makes the premium the
  // Q conditional premium density c(theta) = rho(theta) E_Q[X1]
  double q_claim_mean =
      tilt.q_claims
          ? mean(*tilt.q_claims)
          : expect(model.claims, [&tilt](double x) {
              return x * std::exp(tilt.gamma(x));
            }).value;
  if (!(q_claim_mean > 0.0) || !std::isfinite(q_claim_mean))
    throw DomainError("tilted claim mean not positive finite");

  std::vector<double> weights(n_paths, 0.0);
  std::vector<char> ruined_flag(n_paths, 0);

  parallel_for(n_paths, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    Theta th = q.sample_theta(rng);
    double rho = tilt.rho(th);
    if (!(rho > 0.0)) throw DomainError("rho(theta) must be positive");
    double xi = tilt.xi(th);
    if (!(xi > 0.0)) throw DomainError("xi(theta) must be positive");
    double defect = tilt.alpha_defect ? tilt.alpha_defect(th) : 0.0;
    double log_rho = std::log(rho);
    Law kernel_law = model.kernel.at(th);
    double cond_mean = model.conditional_mean_interarrival(th);
    double alpha = log_rho + std::log(cond_mean) + defect;
    double c = rho * std::exp(defect) * q_claim_mean;  // enforced premium

    double t = 0.0, s = 0.0;
    // primary accumulator: ln M_tau in the reduced structural form
    double log_m = std::log(xi), comp = 0.0;
    auto add = [&log_m, &comp](double x) {
      double y = x - comp;
      double z = log_m + y;
      comp = (z - log_m) - y;
      log_m = z;
    };
    // literal accumulators for the integrand as displayed:
    // (1/xi) e^{-S^beta + N alpha} prod dK/dExp(rho)
    double sum_gamma_alpha = 0.0;  // S_tau^beta
    double sum_k_over_exp = 0.0;

    for (std::size_t j = 1; j <= max_claims; ++j) {
      double w = rng.exponential(rho);
      double x = sample(q.claims, rng);
      t += w;
      s += x;
      double lk = log_pdf(kernel_law, w);
      if (!std::isfinite(lk))
        throw DomainError("singular kernel density under the Q simulation");
      double g = tilt.gamma(x);
      add(g);
      if (defect != 0.0) add(defect);
      add(log_rho - rho * w - lk);
      sum_gamma_alpha += g + alpha;
      sum_k_over_exp += lk - std::log(rho * std::exp(-rho * w));

      double reserve = u + c * t - s;
      if (reserve < 0.0) {
        double log_w_primary = -log_m;
        double log_w_literal = -std::log(xi) - sum_gamma_alpha +
                               static_cast<double>(j) * alpha +
                               sum_k_over_exp;
        if (std::fabs(log_w_primary - log_w_literal) >
            1e-10 * std::max(1.0, std::fabs(log_w_primary)))
          throw Error("ruin weight: algebraic routes disagree");
        weights[i] = std::exp(log_w_primary);
        ruined_flag[i] = 1;
        return;
      }
    }
    // truncated: contributes zero (lower-bound semantics)
  });

  RuinResult res;
  std::size_t ruined = 0;
  for (char f : ruined_flag) ruined += static_cast<std::size_t>(f);
  res.ruined = ruined;
  res.truncated = n_paths - ruined;
  res.lower_bound = res.truncated > 0;
  res.est = make_estimate(weights, seed, res.truncated);
  if (res.truncated * 2 > n_paths)
    throw UnreliableEstimateError(
        "more than half of the Q paths were truncated before ruin");
  return res;
}

double cramer_lundberg_ruin(double lambda, double eta, double c, double u) {
  if (!(lambda > 0.0) || !(eta > 0.0) || !(c > 0.0) || !(u >= 0.0))
    throw ConfigError("cramer-lundberg oracle needs positive parameters");
  if (c <= lambda / eta) return 1.0;  // net profit violated
  double coeff = lambda / (c * eta);
  return coeff * std::exp(-(eta - lambda / c) * u);
}

QuadResult cramer_lundberg_mixed(
    const RiskModel& model, const std::function<double(const Theta&)>& premium,
    double u) {
  const auto* cl = model.claims.get_if<laws::Exponential>();
  if (!cl)
    throw UnsupportedError("mixed oracle requires exponential claims");
  double eta = cl->rate;
  return expect_theta(model, [&model, &premium, eta, u](const Theta& th) {
    auto rate = model.kernel.exp_rate_at(th);
    if (!rate)
      throw UnsupportedError("mixed oracle requires an exponential kernel");
    return cramer_lundberg_ruin(*rate, eta, premium(th), u);
  });
}

}  // namespace cmrp
