#pragma once

// Comparison algorithms: RiskAverse-UCB-BAI and VA-Uniform.

#include <cmath>
#include <cstdint>
#include <vector>

#include "vabai/core.hpp"
#include "vabai/distributions.hpp"
#include "vabai/instance.hpp"
#include "vabai/stats.hpp"
#include "vabai/valucb.hpp"

namespace vabai {

/// 1/(2 eps_mu^2) + 4/eps_v^2
inline double riskaverse_inner_sum(double eps_mu, double eps_v) {
  return 1.0 / (2.0 * eps_mu * eps_mu) + 4.0 / (eps_v * eps_v);
}

/// H' = 3N (1/(2 eps_mu^2) + 4/eps_v^2)
inline double riskaverse_h_prime(std::size_t n_arms, double eps_mu, double eps_v) {
  return 3.0 * static_cast<double>(n_arms) * riskaverse_inner_sum(eps_mu, eps_v);
}

/// H = H' ln( (6N/delta) N (1/(2 eps_mu^2) + 4/eps_v^2) )
inline double riskaverse_budget_H(std::size_t n_arms, double delta, double eps_mu, double eps_v) {
  if (!(eps_mu > 0.0 && eps_v > 0.0))
    throw Error(ErrorKind::invalid_argument, "accuracy parameters must be positive");
  detail::check_delta(delta);
  const double n = static_cast<double>(n_arms);
  const double inner = riskaverse_inner_sum(eps_mu, eps_v);
  return riskaverse_h_prime(n_arms, eps_mu, eps_v) * std::log(6.0 * n / delta * n * inner);
}

/// Variance half of the stopping test. `sample_variance` is the algorithm as
/// written: sample variance - eps_v <= threshold. `upper_bound` replaces the
/// sample variance by its upper confidence bound (sample variance + f_v); it
/// is an analysis variant and never the default.
enum class VarianceStopTest { sample_variance, upper_bound };

struct RiskAverseConfig {
  double eps_mu = 0.0;
  double eps_v = 0.0;
  double budget_H = 0.0;
  VarianceStopTest variance_test = VarianceStopTest::sample_variance;
};

inline RiskAverseConfig riskaverse_config(std::size_t n_arms, double delta, double eps_mu, double eps_v) {
  RiskAverseConfig cfg;
  cfg.eps_mu = eps_mu;
  cfg.eps_v = eps_v;
  cfg.budget_H = riskaverse_budget_H(n_arms, delta, eps_mu, eps_v);
  return cfg;
}

/// Oracle-assisted accuracies: eps_mu = Delta_{i*}, eps_v = min variance gap
/// over risky arms other than i*. Needs a feasible instance with at least one
/// suboptimal and one risky non-optimal arm.
inline RiskAverseConfig riskaverse_config_from_truth(const GroundTruth& gt, double delta) {
  if (!gt.feasible || !gt.i_star)
    throw Error(ErrorKind::no_feasible_arm, "no feasible arm: RiskAverse accuracies undefined");
  const double eps_mu = gt.mean_gaps[*gt.i_star];
  double eps_v = kInf;
  for (ArmIndex i : gt.risky_set)
    if (i != *gt.i_star) eps_v = std::min(eps_v, gt.var_gaps[i]);
  if (!std::isfinite(eps_mu) || !std::isfinite(eps_v))
    throw Error(ErrorKind::invalid_argument,
                "RiskAverse accuracies need a suboptimal arm and a risky non-optimal arm");
  return riskaverse_config(gt.size(), delta, eps_mu, eps_v);
}

/// f_mu(T) = sqrt( ln(6HN/delta) / (2T) )
inline double riskaverse_mean_radius(std::uint64_t pulls, double budget_H, std::size_t n_arms, double delta) {
  return std::sqrt(std::log(6.0 * budget_H * static_cast<double>(n_arms) / delta) /
                   (2.0 * static_cast<double>(pulls)));
}

/// f_v(T) = sqrt( 2 ln(6HN/delta) / T )
inline double riskaverse_var_radius(std::uint64_t pulls, double budget_H, std::size_t n_arms, double delta) {
  return std::sqrt(2.0 * std::log(6.0 * budget_H * static_cast<double>(n_arms) / delta) /
                   static_cast<double>(pulls));
}

/// RiskAverse-UCB-BAI: two warm-up pulls per arm, then one pull per step of
/// the arm with the largest mean UCB among arms whose variance LCB is within
/// the threshold. Stops when the selected arm has f_mu(T) <= eps_mu/2 and
/// sample variance - eps_v <= threshold, or when the pull count reaches H.
/// Always recommends the last selected arm with the feasible flag set.
inline RunResult run_riskaverse_ucb_bai(const BanditInstance& instance, double delta,
                                        const RiskAverseConfig& config, RandomStream& rng,
                                        const EngineOptions& options = {}) {
  detail::check_delta(delta);
  if (!instance.all_bounded())
    throw Error(ErrorKind::invalid_argument, "RiskAverse-UCB-BAI requires bounded arms");
  if (!(config.eps_mu > 0.0 && config.eps_v > 0.0))
    throw Error(ErrorKind::invalid_argument, "accuracy parameters must be positive");

  const std::size_t n = instance.size();
  const double threshold = instance.sigma_bar_sq();
  const double log_term = std::log(6.0 * config.budget_H * static_cast<double>(n) / delta);
  const double mean_factor = options.radius_scale * std::sqrt(log_term / 2.0);
  const double var_factor = options.radius_scale * std::sqrt(2.0 * log_term);

  std::vector<ArmState> states(n);
  std::vector<ConfidenceBounds> bnds(n);
  RunResult result;
  result.per_arm_pulls.assign(n, 0);

  auto pull = [&](ArmIndex i) {
    states[i].update(sample(instance.arm(i), rng));
    ++result.per_arm_pulls[i];
    ++result.tau;
    const double inv = 1.0 / std::sqrt(static_cast<double>(states[i].pulls));
    if (states[i].pulls >= 2) bnds[i] = bounds(states[i], mean_factor * inv, var_factor * inv);
  };

  for (ArmIndex i = 0; i < n; ++i) {
    pull(i);
    pull(i);
  }

  std::uint64_t t = 2 * n;
  for (;;) {
    if (result.time_steps >= options.max_time_steps) {
      result.status = RunStatus::capped;
      return result;
    }
    std::optional<ArmIndex> selected;
    for (ArmIndex i = 0; i < n; ++i) {
      if (bnds[i].l_var > threshold) continue;
      if (!selected || bnds[i].u_mu > bnds[*selected].u_mu) selected = i;
    }
    if (!selected) {
      result.status = RunStatus::empty_candidates;
      return result;
    }
    const ArmIndex sel = *selected;
    pull(sel);
    ++t;
    ++result.time_steps;

    const ArmState& s = states[sel];
    const double inv = 1.0 / std::sqrt(static_cast<double>(s.pulls));
    const bool accurate_mean = mean_factor * inv <= config.eps_mu / 2.0;
    double var_stat = s.sample_variance();
    if (config.variance_test == VarianceStopTest::upper_bound) var_stat += var_factor * inv;
    const bool variance_ok = var_stat - config.eps_v <= threshold;
    if ((accurate_mean && variance_ok) || static_cast<double>(t) >= config.budget_H) {
      result.feasible_flag = true;
      result.recommended_arm = sel;
      result.status = RunStatus::stopped;
      return result;
    }
  }
}

/// Two distinct arms drawn uniformly from the pool (one if the pool is a singleton).
inline ArmSet uniform_pair(ArmSet pool, RandomStream& rng) {
  const std::size_t k = pool.size();
  if (k == 0) throw Error(ErrorKind::invariant_violation, "uniform_pair on empty pool");
  if (k == 1) return pool;
  const std::size_t a = rng.uniform_index(k);
  std::size_t b = rng.uniform_index(k - 1);
  if (b >= a) ++b;
  ArmSet out = ArmSet::single(pool.nth(a));
  out.insert(pool.nth(b));
  return out;
}

struct UniformSelector {
  ArmSet operator()(const Partition& p, std::span<const ConfidenceBounds>, std::span<const double>,
                    RandomStream& rng) const {
    return uniform_pair(p.possibly_feasible(), rng);
  }
};

/// VA-LUCB with the sampling rule replaced by a uniform pair from the
/// possibly feasible set.
template <class Observer = NoObserver>
RunResult run_va_uniform(const BanditInstance& instance, double delta, RandomStream& rng,
                         const EngineOptions& options = {}, Observer&& observer = Observer{}) {
  detail::check_delta(delta);
  if (!instance.all_bounded()) throw Error(ErrorKind::invalid_argument, "VA-Uniform requires bounded arms");
  return run_lucb_engine(instance, EnginePlan::bounded(instance.size(), delta), UniformSelector{}, rng,
                         options, std::forward<Observer>(observer));
}

}  // namespace vabai
