#pragma once

// Brute-force reference evaluator for the hardness quantities.
//
// Deliberately shares no code with hardness.hpp or derive_ground_truth: it
// starts from raw (mean, variance) pairs, enumerates every set as an explicit
// index list, and accumulates in long double. Used as the cross-check oracle.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace vabai::reference {

struct Arm {
  long double mean;
  long double variance;
};

/// Negative-control switch: with `halve_mean_gaps = false` the evaluator uses
/// D_i where the definition uses D_i/2, so it must disagree with the module.
struct Options {
  bool halve_mean_gaps = true;
};

namespace detail {

constexpr long double inf = std::numeric_limits<long double>::infinity();

inline long double inv_sq(long double x) {
  if (x == 0.0L) return inf;
  if (x == inf) return 0.0L;
  return 1.0L / (x * x);
}

}  // namespace detail

struct Sets {
  std::vector<std::size_t> feasible, infeasible, risky, suboptimal;
  std::optional<std::size_t> best;
  std::optional<std::size_t> second;
};

inline Sets classify(const std::vector<Arm>& arms, long double threshold) {
  Sets s;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (arms[i].variance <= threshold) s.feasible.push_back(i);
    else s.infeasible.push_back(i);
  }
  for (std::size_t i : s.feasible)
    if (!s.best || arms[i].mean > arms[*s.best].mean) s.best = i;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (!s.best || arms[i].mean >= arms[*s.best].mean) s.risky.push_back(i);
    else s.suboptimal.push_back(i);
  }
  for (std::size_t i : s.suboptimal)
    if (!s.second || arms[i].mean > arms[*s.second].mean) s.second = i;
  return s;
}

/// D_i for i != i*, D_{i**} for i*, +inf for i* with no suboptimal arm.
inline long double mean_gap(const std::vector<Arm>& arms, const Sets& s, std::size_t i) {
  const long double mu_star = arms[*s.best].mean;
  if (i != *s.best) return mu_star - arms[i].mean;
  if (!s.second) return detail::inf;
  return mu_star - arms[*s.second].mean;
}

inline long double var_gap(const std::vector<Arm>& arms, long double threshold, std::size_t i) {
  const long double d = arms[i].variance - threshold;
  return d < 0 ? -d : d;
}

inline bool contains(const std::vector<std::size_t>& v, std::size_t i) {
  for (std::size_t x : v)
    if (x == i) return true;
  return false;
}

inline long double h_va(const std::vector<Arm>& arms, long double threshold, Options opt = {}) {
  const Sets s = classify(arms, threshold);
  const long double half = opt.halve_mean_gaps ? 2.0L : 1.0L;
  long double total = 0.0L;
  if (s.best) {
    const long double a = mean_gap(arms, s, *s.best) / half;
    const long double b = var_gap(arms, threshold, *s.best);
    total += detail::inv_sq(a < b ? a : b);
  }
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const bool f = contains(s.feasible, i);
    const bool sub = contains(s.suboptimal, i);
    const bool risky = contains(s.risky, i);
    if (f && sub) total += detail::inv_sq(mean_gap(arms, s, i) / half);
    if (!f && risky) total += detail::inv_sq(var_gap(arms, threshold, i));
    if (!f && sub) {
      const long double a = mean_gap(arms, s, i) / half;
      const long double b = var_gap(arms, threshold, i);
      total += detail::inv_sq(a > b ? a : b);
    }
  }
  return total;
}

inline std::optional<long double> h1(const std::vector<Arm>& arms, long double threshold) {
  const Sets s = classify(arms, threshold);
  if (!s.best) return std::nullopt;
  long double total = 0.0L;
  for (std::size_t i = 0; i < arms.size(); ++i)
    if (i != *s.best) total += detail::inv_sq(mean_gap(arms, s, i));
  return total;
}

inline std::optional<long double> david_ci(const std::vector<Arm>& arms, long double threshold,
                                           long double eps_mu, long double eps_v, std::size_t i) {
  const Sets s = classify(arms, threshold);
  if (!s.best) return std::nullopt;
  auto pos = [](long double x) { return x > 0 ? x : 0.0L; };
  const long double excess = arms[i].variance - threshold;
  const long double e1 = detail::inv_sq(pos(arms[*s.best].mean - arms[i].mean));
  const long double e2 = 4.0L * detail::inv_sq(pos(excess));
  const long double e3a = 1.0L / (eps_mu * eps_mu);
  const long double e3b = 4.0L * detail::inv_sq(pos(eps_v - excess));
  const long double e3 = e3a > e3b ? e3a : e3b;
  long double m = e1;
  if (e2 < m) m = e2;
  if (e3 < m) m = e3;
  return m;
}

/// Relative difference |a - b| / max(|a|, |b|), 0 when both are equal
/// (including both infinite).
inline long double relative_difference(long double a, long double b) {
  if (a == b) return 0.0L;
  const long double d = a - b;
  const long double m = std::fmax(std::fabs(a), std::fabs(b));
  return std::fabs(d) / m;
}

}  // namespace vabai::reference
