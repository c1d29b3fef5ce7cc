#pragma once

// Instance catalog, seeded multi-trial runner, scoring, and aggregation.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "vabai/baselines.hpp"
#include "vabai/core.hpp"
#include "vabai/distributions.hpp"
#include "vabai/hardness.hpp"
#include "vabai/instance.hpp"
#include "vabai/valucb.hpp"

namespace vabai {

// ---------------------------------------------------------------------------
// Catalog

struct CatalogEntry {
  std::string case_id;
  int j = 0;
  std::vector<Moments> arm_moments;  // (mean, variance) as given by the table formulas
  BanditInstance instance;
  GroundTruth ground_truth;
  /// RiskAverse variance accuracy prescribed by the comparison family; empty elsewhere.
  std::optional<double> baseline_eps_v;
};

inline const std::vector<std::string>& catalog_cases() {
  static const std::vector<std::string> ids = {"1a", "1b", "1c", "1d", "2",  "3",
                                               "4a", "4b", "4c", "4d", "cmp"};
  return ids;
}

inline std::pair<int, int> catalog_j_range(std::string_view case_id) {
  if (case_id == "cmp") return {1, 10};
  return {0, 10};
}

namespace detail {

/// i*, i**, then 18 copies of the generic arm.
inline std::vector<Moments> twenty_arms(Moments best, Moments second, Moments rest) {
  std::vector<Moments> arms{best, second};
  arms.insert(arms.end(), 18, rest);
  return arms;
}

}  // namespace detail

/// The (case, j) instance. Every (mean, variance) pair becomes a Beta arm.
/// Beta rewards lie in [0,1], so the instance carries sub-Gaussian proxy 1/2.
inline CatalogEntry catalog_instance(const std::string& case_id, int j) {
  const auto [lo, hi] = catalog_j_range(case_id);
  bool known = false;
  for (const auto& c : catalog_cases()) known = known || c == case_id;
  if (!known) throw Error(ErrorKind::invalid_argument, "unknown catalog case '" + case_id + "'");
  if (j < lo || j > hi)
    throw Error(ErrorKind::invalid_argument,
                "catalog case " + case_id + " has j in [" + std::to_string(lo) + "," + std::to_string(hi) + "]");

  const double g12 = std::pow(1.2, j);
  const double g11 = std::pow(1.1, j);
  std::vector<Moments> arms;
  double threshold = 0.0;
  std::optional<double> eps_v;

  if (case_id == "1a") {
    threshold = 0.25;
    const double d = 0.01 * g12;
    arms = detail::twenty_arms({0.7, 0.09}, {0.7 - d, 0.09}, {0.2, 0.09});
  } else if (case_id == "1b") {
    threshold = 0.25;
    arms = detail::twenty_arms({0.55, threshold - 0.01 * g12}, {0.53, 0.09}, {0.15, 0.09});
  } else if (case_id == "1c") {
    threshold = 0.25;
    arms = detail::twenty_arms({0.55, threshold - 0.01 * g12}, {0.15, 0.09}, {0.15, 0.09});
  } else if (case_id == "1d") {
    threshold = 0.04;
    const double d = 0.02 * g11;
    arms = detail::twenty_arms({0.7, 0.03}, {0.7 - d, 0.03}, {0.3, 0.03});
  } else if (case_id == "2") {
    threshold = 0.25;
    const double d = 0.02 * g12;
    arms = detail::twenty_arms({0.7, 0.09}, {0.7 - d, 0.09}, {0.7 - d, 0.09});
  } else if (case_id == "3") {
    threshold = 0.04;
    arms.assign(20, Moments{0.55, threshold + 0.01 * g12});
  } else if (case_id == "4a") {
    threshold = 0.04;
    const double d = 0.02 * g12;
    arms = detail::twenty_arms({0.7, 0.03}, {0.7 - d, 0.2}, {0.7 - d, 0.2});
  } else if (case_id == "4b") {
    threshold = 0.04;
    const double v = threshold + 0.05 * g11;
    arms = detail::twenty_arms({0.55, 0.03}, {0.53, v}, {0.53, v});
  } else if (case_id == "4c") {
    threshold = 0.2;
    const double d = 0.09 * g11;
    arms = detail::twenty_arms({0.7, 0.04}, {0.7 - d, 0.21}, {0.7 - d, 0.21});
  } else if (case_id == "4d") {
    threshold = 0.04;
    const double v = threshold + 0.01 * g12;
    arms = detail::twenty_arms({0.7, 0.03}, {0.3, v}, {0.3, v});
  } else {  // cmp
    threshold = 0.2;
    const double risky_var = 0.233 - 0.003 * j;
    arms = {{0.1, 0.08}, {0.15, 0.1}, {0.2, 0.12}, {0.25, 0.14}, {0.3, 0.16},
            {0.4, risky_var}, {0.45, risky_var}, {0.5, risky_var}, {0.55, risky_var}, {0.6, risky_var}};
    eps_v = risky_var - threshold;
  }

  std::vector<DistributionSpec> specs;
  specs.reserve(arms.size());
  for (const Moments& m : arms) specs.push_back(beta_from_moments(m.mean, m.variance));
  BanditInstance instance(std::move(specs), threshold, 0.5);
  GroundTruth gt = derive_ground_truth(instance);
  return {case_id, j, std::move(arms), std::move(instance), std::move(gt), eps_v};
}

inline std::vector<CatalogEntry> full_catalog() {
  std::vector<CatalogEntry> out;
  for (const auto& c : catalog_cases()) {
    const auto [lo, hi] = catalog_j_range(c);
    for (int j = lo; j <= hi; ++j) out.push_back(catalog_instance(c, j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Seeds

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Stream seed for one trial. Each component is folded through mix64 in a
/// fixed order, so the seed of a (case, j, trial) never depends on which
/// other cases exist.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial, std::string_view case_id,
                                std::int64_t j) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ fnv1a(case_id));
  h = mix64(h ^ static_cast<std::uint64_t>(j));
  h = mix64(h ^ trial);
  return h;
}

// ---------------------------------------------------------------------------
// Trials

enum class AlgorithmId { valucb, valucb_subg, riskaverse, va_uniform };

inline std::string to_string(AlgorithmId a) {
  switch (a) {
    case AlgorithmId::valucb: return "valucb";
    case AlgorithmId::valucb_subg: return "valucb_subg";
    case AlgorithmId::riskaverse: return "riskaverse";
    case AlgorithmId::va_uniform: return "va_uniform";
  }
  return "?";
}

inline AlgorithmId parse_algorithm(std::string_view s) {
  if (s == "valucb") return AlgorithmId::valucb;
  if (s == "valucb_subg") return AlgorithmId::valucb_subg;
  if (s == "riskaverse") return AlgorithmId::riskaverse;
  if (s == "va_uniform") return AlgorithmId::va_uniform;
  throw Error(ErrorKind::invalid_argument, "unknown algorithm '" + std::string(s) + "'");
}

/// True iff a terminated run declared feasibility correctly and, when
/// feasible, returned i*.
inline bool score_success(const RunResult& result, const GroundTruth& gt) {
  if (!result.terminated()) return false;
  if (gt.feasible) return result.feasible_flag && result.recommended_arm == gt.i_star;
  return !result.feasible_flag;
}

/// A labelled instance to run trials on; catalog entries and inline
/// instances both reduce to this.
struct TrialTarget {
  std::string case_id;
  std::int64_t j = 0;
  const BanditInstance* instance = nullptr;
  const GroundTruth* ground_truth = nullptr;
  std::optional<double> baseline_eps_v;
};

inline TrialTarget target_of(const CatalogEntry& e) {
  return {e.case_id, e.j, &e.instance, &e.ground_truth, e.baseline_eps_v};
}

struct TrialConfig {
  AlgorithmId algorithm = AlgorithmId::valucb;
  double delta = 0.05;
  std::uint64_t n_trials = 20;
  std::uint64_t master_seed = 0;
  unsigned parallel = 1;
  EngineOptions engine;
  VarianceStopTest riskaverse_variance_test = VarianceStopTest::sample_variance;
};

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t tau = 0;
  std::uint64_t time_steps = 0;
  bool success = false;
  RunStatus status = RunStatus::stopped;
};

struct AggregateResult {
  AlgorithmId algorithm = AlgorithmId::valucb;
  std::string case_id;
  std::int64_t j = 0;
  std::uint64_t n_trials = 0;
  double mean_tau = 0.0;
  double std_tau = 0.0;  // sample standard deviation (n-1)
  double success_rate = 0.0;
  double mean_time_steps = 0.0;
  std::uint64_t capped = 0;
  std::uint64_t empty_candidates = 0;
  HardnessReport hardness;
  std::vector<TrialRecord> trials;
};

/// RiskAverse accuracies for a target: eps_mu = D_{i*}; eps_v from the
/// catalog when prescribed, else the smallest risky non-optimal variance gap.
inline RiskAverseConfig riskaverse_config_for(const TrialTarget& target, double delta) {
  const GroundTruth& gt = *target.ground_truth;
  if (target.baseline_eps_v) {
    if (!gt.i_star) throw Error(ErrorKind::no_feasible_arm, "no feasible arm: RiskAverse accuracies undefined");
    return riskaverse_config(gt.size(), delta, gt.mean_gaps[*gt.i_star], *target.baseline_eps_v);
  }
  return riskaverse_config_from_truth(gt, delta);
}

inline RunResult run_one(AlgorithmId algorithm, const BanditInstance& instance, double delta, RandomStream& rng,
                         const EngineOptions& options, const std::optional<RiskAverseConfig>& ra) {
  switch (algorithm) {
    case AlgorithmId::valucb: return run_valucb(instance, delta, rng, options);
    case AlgorithmId::valucb_subg: return run_valucb_subg(instance, delta, rng, options);
    case AlgorithmId::riskaverse: return run_riskaverse_ucb_bai(instance, delta, *ra, rng, options);
    case AlgorithmId::va_uniform: return run_va_uniform(instance, delta, rng, options);
  }
  throw Error(ErrorKind::invalid_argument, "unknown algorithm");
}

inline AggregateResult run_trials(const TrialTarget& target, const TrialConfig& cfg) {
  if (cfg.n_trials < 1) throw Error(ErrorKind::invalid_argument, "n_trials must be at least 1");
  detail::check_delta(cfg.delta);
  const GroundTruth& gt = *target.ground_truth;

  // Configuration errors surface here, before any thread starts.
  std::optional<RiskAverseConfig> ra;
  if (cfg.algorithm == AlgorithmId::riskaverse) {
    ra = riskaverse_config_for(target, cfg.delta);
    ra->variance_test = cfg.riskaverse_variance_test;
  }
  if (cfg.algorithm == AlgorithmId::valucb_subg && !target.instance->subg_proxy())
    throw Error(ErrorKind::missing_subg_proxy, "missing sub-Gaussian proxy");
  if (cfg.algorithm != AlgorithmId::valucb_subg && !target.instance->all_bounded())
    throw Error(ErrorKind::invalid_argument, to_string(cfg.algorithm) + " requires bounded arms");

  std::vector<TrialRecord> records(cfg.n_trials);
  auto run_index = [&](std::uint64_t k) {
    TrialRecord& r = records[k];
    r.trial = k;
    r.seed = trial_seed(cfg.master_seed, k, target.case_id, target.j);
    RandomStream rng(r.seed);
    const RunResult res = run_one(cfg.algorithm, *target.instance, cfg.delta, rng, cfg.engine, ra);
    r.tau = res.tau;
    r.time_steps = res.time_steps;
    r.status = res.status;
    r.success = score_success(res, gt);
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.parallel, static_cast<unsigned>(cfg.n_trials)));
  if (workers == 1) {
    for (std::uint64_t k = 0; k < cfg.n_trials; ++k) run_index(k);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t k; (k = next.fetch_add(1)) < cfg.n_trials;) run_index(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Reduction in trial order keeps the aggregate independent of scheduling.
  AggregateResult agg;
  agg.algorithm = cfg.algorithm;
  agg.case_id = target.case_id;
  agg.j = target.j;
  agg.n_trials = cfg.n_trials;
  double sum_tau = 0.0, sum_steps = 0.0;
  std::uint64_t wins = 0;
  for (const auto& r : records) {
    sum_tau += static_cast<double>(r.tau);
    sum_steps += static_cast<double>(r.time_steps);
    wins += r.success ? 1 : 0;
    agg.capped += r.status == RunStatus::capped ? 1 : 0;
    agg.empty_candidates += r.status == RunStatus::empty_candidates ? 1 : 0;
  }
  const double n = static_cast<double>(cfg.n_trials);
  agg.mean_tau = sum_tau / n;
  agg.mean_time_steps = sum_steps / n;
  agg.success_rate = static_cast<double>(wins) / n;
  if (cfg.n_trials > 1) {
    double ss = 0.0;
    for (const auto& r : records) {
      const double d = static_cast<double>(r.tau) - agg.mean_tau;
      ss += d * d;
    }
    agg.std_tau = std::sqrt(ss / (n - 1.0));
  }
  agg.hardness = hardness_report(gt, cfg.delta);
  agg.trials = std::move(records);
  return agg;
}

inline AggregateResult run_trials(const CatalogEntry& entry, const TrialConfig& cfg) {
  return run_trials(target_of(entry), cfg);
}

}  // namespace vabai
