#include "cmrp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "cmrp/errors.hpp"
#include "cmrp/rng.hpp"

namespace cmrp {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 32) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

Estimate make_estimate(std::span<const double> values, std::uint64_t seed,
                       std::size_t truncated) {
  Estimate e;
  e.n = values.size();
  e.seed = seed;
  e.truncated = truncated;
  if (e.n == 0) throw DomainError("estimate over an empty sample");
  double mean = pairwise_sum(values) / static_cast<double>(e.n);
  e.value = mean;
  if (e.n < 2) return e;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double d = values[i] - mean;
    sq[i] = d * d;
  }
  double var = pairwise_sum(sq) / static_cast<double>(e.n - 1);
  e.stderr_ = std::sqrt(var / static_cast<double>(e.n));
  return e;
}

CheckReport make_check(std::string name, double t, double target,
                       const Estimate& est, double z_threshold) {
  CheckReport r;
  r.name = std::move(name);
  r.t = t;
  r.target = target;
  r.est = est;
  r.z_threshold = z_threshold;
  double diff = est.value - target;
  if (est.stderr_ > 0.0) {
    r.z = diff / est.stderr_;
    r.pass = std::fabs(r.z) <= z_threshold;
  } else {
    r.z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    r.pass = diff == 0.0;
  }
  return r;
}

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    double hi = (static_cast<double>(i) + 1.0) / n - f;
    double lo = f - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

double ks_critical(std::size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) /
         std::sqrt(static_cast<double>(n));
}

namespace {

struct KsRecord {
  double value;
  double weight;   // contribution if assigned to the weighted group
  bool weighted;   // current label
};

// D over pre-sorted records: weighted side adds w/n, plain side 1/m; runs
// of equal values are flushed before the supremum is probed.
double weighted_ks_d(const std::vector<KsRecord>& recs, double n, double m) {
  double acc = 0.0;
  double d = 0.0;
  std::size_t i = 0;
  while (i < recs.size()) {
    double v = recs[i].value;
    while (i < recs.size() && recs[i].value == v) {
      if (recs[i].weighted)
        acc += recs[i].weight / n;
      else
        acc -= 1.0 / m;
      ++i;
    }
    d = std::max(d, std::fabs(acc));
  }
  return d;
}

}  // namespace

WeightedKsReport weighted_ks_permutation(std::span<const double> x,
                                         std::span<const double> wx,
                                         std::span<const double> y,
                                         std::uint64_t seed,
                                         int n_permutations, double alpha,
                                         double ess_floor) {
  if (x.size() != wx.size() || x.empty() || y.empty())
    throw DomainError("weighted KS: bad sample sizes");
  WeightedKsReport rep;
  double sw = pairwise_sum(wx);
  std::vector<double> w2(wx.size());
  for (std::size_t i = 0; i < wx.size(); ++i) w2[i] = wx[i] * wx[i];
  double sw2 = pairwise_sum(w2);
  rep.ess = sw2 > 0.0 ? sw * sw / sw2 : 0.0;
  if (rep.ess < ess_floor) {
    rep.inconclusive = true;
    return rep;
  }

  std::vector<KsRecord> recs;
  recs.reserve(x.size() + y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    recs.push_back({x[i], wx[i], true});
  for (std::size_t j = 0; j < y.size(); ++j) recs.push_back({y[j], 1.0, false});
  std::sort(recs.begin(), recs.end(),
            [](const KsRecord& a, const KsRecord& b) {
              return a.value < b.value;
            });
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  rep.d = weighted_ks_d(recs, n, m);

  // permutation null: labels are exchangeable, weights travel with their
  // observation (an item assigned to the plain group contributes 1/m)
  std::vector<std::size_t> idx(recs.size());
  std::iota(idx.begin(), idx.end(), 0);
  RngStream rng(seed, 0x77ED0AA5u);
  std::vector<char> label(recs.size());
  std::vector<double> perm_d(static_cast<std::size_t>(n_permutations));
  int count_ge = 0;
  for (int b = 0; b < n_permutations; ++b) {
    // Fisher-Yates selection of which records are "weighted"
    for (std::size_t i = recs.size(); i-- > 1;) {
      std::size_t j = static_cast<std::size_t>(rng.next_u64() % (i + 1));
      std::swap(idx[i], idx[j]);
    }
    std::fill(label.begin(), label.end(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) label[idx[i]] = 1;
    double acc = 0.0;
    double d = 0.0;
    std::size_t i = 0;
    while (i < recs.size()) {
      double v = recs[i].value;
      while (i < recs.size() && recs[i].value == v) {
        if (label[i])
          acc += recs[i].weight / n;
        else
          acc -= 1.0 / m;
        ++i;
      }
      d = std::max(d, std::fabs(acc));
    }
    perm_d[static_cast<std::size_t>(b)] = d;
    if (d >= rep.d) ++count_ge;
  }
  rep.p_value =
      (1.0 + count_ge) / (static_cast<double>(n_permutations) + 1.0);
  std::sort(perm_d.begin(), perm_d.end());
  std::size_t k = static_cast<std::size_t>(
      std::ceil((1.0 - alpha) * (n_permutations + 1))) - 1;
  k = std::min(k, perm_d.size() - 1);
  rep.crit = perm_d[k];
  rep.pass = rep.p_value > alpha;
  return rep;
}

double empirical_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw DomainError("quantile of empty sample");
  std::sort(values.begin(), values.end());
  double pos = p * static_cast<double>(values.size());
  std::size_t k = pos <= 1.0 ? 0
                             : std::min(values.size() - 1,
                                        static_cast<std::size_t>(
                                            std::ceil(pos)) - 1);
  return values[k];
}

}  // namespace cmrp
