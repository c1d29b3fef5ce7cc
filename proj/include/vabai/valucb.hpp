#pragma once

// VA-LUCB and its sub-Gaussian variant.
//
// The step-wise primitives (partition_arms, potential_set, check_stop,
// select_arms) are pure functions of the bounds they are given. The engine
// below drives them; it is templated on the sampling policy so VA-Uniform
// reuses the identical statistics, partition, and stopping logic.
//
// Time indexing follows the algorithm: after the bounded warm-up (two pulls
// per arm) the first time step is t = N + 1; after the sub-Gaussian warm-up
// (T0 pulls per arm) it is t = T0 + 1. Bounds are recomputed each step only
// for arms that were possibly feasible at the previous step; an arm declared
// infeasible is frozen and never pulled again.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vabai/core.hpp"
#include "vabai/distributions.hpp"
#include "vabai/instance.hpp"
#include "vabai/stats.hpp"

namespace vabai {

struct Partition {
  ArmSet feasible;         // U^v <= threshold (+ eps_v)
  ArmSet almost_feasible;  // L^v <= threshold, not in feasible
  ArmSet infeasible;       // L^v > threshold

  ArmSet possibly_feasible() const { return feasible | almost_feasible; }
  ArmSet active() const { return feasible | almost_feasible | infeasible; }
};

/// Partition the active arms by their variance bounds. With eps_v > 0 the
/// feasible rule relaxes to U^v <= threshold + eps_v; possible feasibility
/// is still L^v <= threshold.
inline Partition partition_arms(std::span<const ConfidenceBounds> bounds, ArmSet active,
                                double sigma_bar_sq, double eps_v = 0.0) {
  Partition p;
  for (ArmIndex i : active) {
    const ConfidenceBounds& b = bounds[i];
    if (b.l_var > sigma_bar_sq) p.infeasible.insert(i);
    else if (b.u_var <= sigma_bar_sq + eps_v) p.feasible.insert(i);
    else p.almost_feasible.insert(i);
  }
  return p;
}

/// argmax of values over a nonempty set, smallest index on ties.
inline ArmIndex argmax_over(ArmSet set, std::span<const double> values) {
  ArmIndex best = set.front();
  for (ArmIndex i : set)
    if (values[i] > values[best]) best = i;
  return best;
}

/// Empirically best feasible arm, if any arm is empirically feasible.
inline std::optional<ArmIndex> empirical_best_feasible(const Partition& p,
                                                       std::span<const double> sample_means) {
  if (p.feasible.empty()) return std::nullopt;
  return argmax_over(p.feasible, sample_means);
}

/// Arms whose mean UCB reaches the leader's mean LCB. Membership is only
/// evaluated over the possibly feasible set: bounds outside it are stale, and
/// the stopping rule only ever looks at that intersection.
inline ArmSet potential_set(std::span<const ConfidenceBounds> bounds, const Partition& p,
                            std::optional<ArmIndex> i_t_star) {
  if (p.feasible.empty() || !i_t_star) return p.active();
  const double leader_lcb = bounds[*i_t_star].l_mu;
  ArmSet out;
  for (ArmIndex i : p.possibly_feasible())
    if (i != *i_t_star && bounds[i].u_mu >= leader_lcb) out.insert(i);
  return out;
}

struct Recommendation {
  bool feasible_flag = false;
  std::optional<ArmIndex> arm;
};

/// Stop iff no possibly feasible arm is still in the potential set.
inline std::optional<Recommendation> check_stop(const Partition& p, ArmSet potential,
                                                std::span<const double> sample_means) {
  const ArmSet pf = p.possibly_feasible();
  if (!(pf & potential).empty()) return std::nullopt;
  if (p.feasible.empty()) return Recommendation{false, std::nullopt};
  return Recommendation{true, argmax_over(pf, sample_means)};
}

struct SamplingDecision {
  ArmIndex leader;
  std::optional<ArmIndex> competitor;

  ArmSet arms() const {
    ArmSet s = ArmSet::single(leader);
    if (competitor) s.insert(*competitor);
    return s;
  }
};

/// LUCB-style choice: the empirical leader i_t over the possibly feasible
/// set, plus its best competitor c_t when their mean intervals overlap.
inline SamplingDecision select_arms(const Partition& p, std::span<const ConfidenceBounds> bounds,
                                    std::span<const double> sample_means) {
  const ArmSet pf = p.possibly_feasible();
  if (pf.empty()) throw Error(ErrorKind::invariant_violation, "select_arms on empty possibly feasible set");
  const ArmIndex leader = argmax_over(pf, sample_means);
  if (pf.size() == 1) return {leader, std::nullopt};
  const ArmSet others = pf - ArmSet::single(leader);
  ArmIndex comp = others.front();
  for (ArmIndex i : others)
    if (bounds[i].u_mu > bounds[comp].u_mu) comp = i;
  if (bounds[comp].u_mu >= bounds[leader].l_mu) return {leader, comp};
  return {leader, std::nullopt};
}

enum class RunStatus {
  stopped,           // stopping rule fired
  capped,            // max_time_steps reached
  empty_candidates,  // RiskAverse-UCB-BAI found no selectable arm
};

struct RunResult {
  bool feasible_flag = false;
  std::optional<ArmIndex> recommended_arm;
  std::uint64_t tau = 0;         // arm pulls, warm-up included
  std::uint64_t time_steps = 0;  // post-warm-up steps that pulled at least one arm
  std::vector<std::uint64_t> per_arm_pulls;
  RunStatus status = RunStatus::stopped;

  bool terminated() const { return status == RunStatus::stopped; }
};

struct EngineOptions {
  std::uint64_t max_time_steps = 1'000'000'000;
  double radius_scale = 1.0;
};

/// Snapshot handed to an observer at every post-warm-up time step.
struct StepView {
  std::uint64_t t;
  ArmSet previously_possibly_feasible;  // arms whose bounds were refreshed this step
  std::span<const ConfidenceBounds> bounds;
  std::span<const double> sample_means;
  std::span<const ArmState> states;
  const Partition& partition;
  std::optional<ArmIndex> empirical_best;
  ArmSet potential;
  std::optional<Recommendation> stop;
  ArmSet pulled;  // arms pulled this step (empty on the stopping step)
};

struct NoObserver {
  void operator()(const StepView&) const {}
};

/// Smallest t with t >= (128/c) ln(k N t^4 / delta).
inline std::uint64_t warmup_length_T0(std::size_t n_arms, double delta, double k = kSubgK,
                                      double c = kSubgC) {
  for (std::uint64_t t = 1;; ++t)
    if (static_cast<double>(t) >= 128.0 / c * subg_log_term(t, n_arms, delta, k)) return t;
}

/// Pull count below which an arm would let the next step's variance radius
/// exceed c*sigma^2/8: ceil((128/c) ln(k N (t+1)^4 / delta)).
inline std::uint64_t forced_pull_threshold(std::uint64_t t, std::size_t n_arms, double delta,
                                           double k = kSubgK, double c = kSubgC) {
  return static_cast<std::uint64_t>(std::ceil(128.0 / c * subg_log_term(t + 1, n_arms, delta, k)));
}

namespace detail {

inline void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::invalid_argument, "delta must lie in (0,1)");
}

}  // namespace detail

/// How an engine run warms up and which radii it uses.
struct EnginePlan {
  RadiusModel radii;
  std::uint64_t warmup_pulls = 2;  // per arm
  std::uint64_t first_step = 0;    // index t of the first post-warm-up step
  bool forced_sampling = false;

  static EnginePlan bounded(std::size_t n, double delta) {
    return {RadiusModel::bounded(n, delta), 2, n + 1, false};
  }
  static EnginePlan subgaussian(std::size_t n, double delta, double sigma) {
    const std::uint64_t t0 = warmup_length_T0(n, delta);
    return {RadiusModel::subgaussian(n, delta, sigma), t0, t0 + 1, true};
  }
};

/// Shared driver for VA-LUCB, its sub-Gaussian variant, and VA-Uniform.
///
/// `select(partition, bounds, means, rng)` returns the arms to pull at a
/// non-terminal step. With forced sampling on, every possibly feasible arm
/// not pulled this step whose count is below forced_pull_threshold is pulled
/// once more.
template <class Selector, class Observer = NoObserver>
RunResult run_lucb_engine(const BanditInstance& instance, const EnginePlan& plan, Selector&& select,
                          RandomStream& rng, const EngineOptions& options = {},
                          Observer&& observer = Observer{}) {
  const std::size_t n = instance.size();
  RadiusModel radii = plan.radii;
  const bool forced_sampling = plan.forced_sampling;
  const double threshold = instance.sigma_bar_sq();
  const double eps_v = instance.eps_v();
  radii.scale = options.radius_scale;

  std::vector<ArmState> states(n);
  std::vector<ConfidenceBounds> bnds(n);
  std::vector<double> means(n, 0.0);
  RunResult result;
  result.per_arm_pulls.assign(n, 0);

  auto pull = [&](ArmIndex i) {
    states[i].update(sample(instance.arm(i), rng));
    ++result.per_arm_pulls[i];
    ++result.tau;
  };

  for (std::uint64_t rep = 0; rep < plan.warmup_pulls; ++rep)
    for (ArmIndex i = 0; i < n; ++i) pull(i);

  ArmSet active = ArmSet::all(n);
  std::uint64_t t = plan.first_step;

  for (;; ++t) {
    const RadiusModel::StepFactors f = radii.at(t);
    for (ArmIndex i : active) {
      bnds[i] = bounds_at(states[i], f);
      means[i] = states[i].mean;
    }
    const Partition part = partition_arms(bnds, active, threshold, eps_v);
    const std::optional<ArmIndex> best = empirical_best_feasible(part, means);
    const ArmSet potential = potential_set(bnds, part, best);
    const std::optional<Recommendation> stop = check_stop(part, potential, means);

    if (stop) {
      observer(StepView{t, active, bnds, means, states, part, best, potential, stop, ArmSet{}});
      result.feasible_flag = stop->feasible_flag;
      result.recommended_arm = stop->arm;
      result.status = RunStatus::stopped;
      return result;
    }
    if (result.time_steps >= options.max_time_steps) {
      result.status = RunStatus::capped;
      return result;
    }

    ArmSet pulled = select(part, std::span<const ConfidenceBounds>(bnds), std::span<const double>(means), rng);
    for (ArmIndex i : pulled) pull(i);
    if (forced_sampling) {
      const std::uint64_t need = forced_pull_threshold(t, n, radii.delta, radii.k, radii.c);
      const ArmSet forced = part.possibly_feasible() - pulled;
      for (ArmIndex i : forced) {
        if (states[i].pulls < need) {
          pull(i);
          pulled.insert(i);
        }
      }
    }
    ++result.time_steps;
    observer(StepView{t, active, bnds, means, states, part, best, potential, std::nullopt, pulled});
    active = part.possibly_feasible();
  }
}

struct LucbSelector {
  ArmSet operator()(const Partition& p, std::span<const ConfidenceBounds> b, std::span<const double> m,
                    RandomStream&) const {
    return select_arms(p, b, m).arms();
  }
};

/// VA-LUCB on [0,1]-bounded arms.
template <class Observer = NoObserver>
RunResult run_valucb(const BanditInstance& instance, double delta, RandomStream& rng,
                     const EngineOptions& options = {}, Observer&& observer = Observer{}) {
  detail::check_delta(delta);
  if (!instance.all_bounded())
    throw Error(ErrorKind::invalid_argument, "VA-LUCB requires bounded (Bernoulli/Beta) arms");
  return run_lucb_engine(instance, EnginePlan::bounded(instance.size(), delta), LucbSelector{}, rng,
                         options, std::forward<Observer>(observer));
}

/// VA-LUCB for sigma-sub-Gaussian arms: T0 warm-up pulls per arm, sub-Gaussian
/// radii, and forced sampling that keeps every possibly feasible arm's
/// variance radius at or below c*sigma^2/8.
template <class Observer = NoObserver>
RunResult run_valucb_subg(const BanditInstance& instance, double delta, RandomStream& rng,
                          const EngineOptions& options = {}, Observer&& observer = Observer{}) {
  detail::check_delta(delta);
  if (!instance.subg_proxy())
    throw Error(ErrorKind::missing_subg_proxy, "missing sub-Gaussian proxy");
  return run_lucb_engine(instance, EnginePlan::subgaussian(instance.size(), delta, *instance.subg_proxy()),
                         LucbSelector{}, rng, options, std::forward<Observer>(observer));
}

}  // namespace vabai
