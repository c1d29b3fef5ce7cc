#pragma once

// Streaming per-arm estimators and the confidence radii / bounds.

#include <cmath>
#include <cstdint>

#include "vabai/core.hpp"

namespace vabai {

/// Running pull count, mean, and sum of squared deviations (Welford).
struct ArmState {
  std::uint64_t pulls = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void update(double reward) {
    ++pulls;
    const double d = reward - mean;
    mean += d / static_cast<double>(pulls);
    m2 += d * (reward - mean);
  }

  /// Unbiased sample variance; requires at least two pulls.
  double sample_variance() const {
    if (pulls < 2) throw Error(ErrorKind::insufficient_samples, "insufficient samples for variance");
    return m2 / static_cast<double>(pulls - 1);
  }
};

inline ArmState update(ArmState state, double reward) {
  state.update(reward);
  return state;
}

struct ConfidenceBounds {
  double l_mu = 0.0;
  double u_mu = 0.0;
  double l_var = 0.0;
  double u_var = 0.0;
};

// Log terms are assembled as ln(const) + 4 ln t so large t never overflows.

/// ln(2 N t^4 / delta)
inline double bounded_log_term(std::uint64_t t, std::size_t n_arms, double delta) {
  return std::log(2.0 * static_cast<double>(n_arms) / delta) + 4.0 * std::log(static_cast<double>(t));
}

/// ln(k N t^4 / delta)
inline double subg_log_term(std::uint64_t t, std::size_t n_arms, double delta, double k) {
  return std::log(k * static_cast<double>(n_arms) / delta) + 4.0 * std::log(static_cast<double>(t));
}

/// Shared mean and variance radius for [0,1]-bounded rewards:
/// sqrt( ln(2 N t^4 / delta) / (2T) ).
inline double radius_bounded(std::uint64_t t, std::uint64_t pulls, std::size_t n_arms, double delta) {
  return std::sqrt(bounded_log_term(t, n_arms, delta) / (2.0 * static_cast<double>(pulls)));
}

inline constexpr double kSubgK = 2.0;
inline constexpr double kSubgC = 64.0;

/// sqrt( (2 sigma^2 / T) ln(k N t^4 / delta) )
inline double radius_subg_mean(std::uint64_t t, std::uint64_t pulls, std::size_t n_arms, double delta,
                               double sigma, double k = kSubgK) {
  return std::sqrt(2.0 * sigma * sigma / static_cast<double>(pulls) *
                   subg_log_term(t, n_arms, delta, k));
}

/// sqrt( (2 c sigma^4 / T) ln(k N t^4 / delta) )
inline double radius_subg_var(std::uint64_t t, std::uint64_t pulls, std::size_t n_arms, double delta,
                              double sigma, double k = kSubgK, double c = kSubgC) {
  const double s2 = sigma * sigma;
  return std::sqrt(2.0 * c * s2 * s2 / static_cast<double>(pulls) *
                   subg_log_term(t, n_arms, delta, k));
}

inline ConfidenceBounds bounds(const ArmState& state, double mean_radius, double var_radius) {
  if (state.pulls < 2) throw Error(ErrorKind::insufficient_samples, "insufficient samples for bounds");
  const double v = state.sample_variance();
  return {state.mean - mean_radius, state.mean + mean_radius, v - var_radius, v + var_radius};
}

/// Radius family used by an engine run. The log term depends only on the
/// time step, so engines evaluate it once per step and then scale by 1/sqrt(T).
struct RadiusModel {
  enum class Kind { bounded, subgaussian };

  Kind kind = Kind::bounded;
  std::size_t n_arms = 0;
  double delta = 0.1;
  double sigma = 0.5;
  double k = kSubgK;
  double c = kSubgC;
  /// Multiplies both radii. 1 in every real run; other values exist only to
  /// build negative-control fixtures.
  double scale = 1.0;

  static RadiusModel bounded(std::size_t n, double delta) {
    RadiusModel m;
    m.n_arms = n;
    m.delta = delta;
    return m;
  }
  static RadiusModel subgaussian(std::size_t n, double delta, double sigma, double k = kSubgK,
                                 double c = kSubgC) {
    RadiusModel m;
    m.kind = Kind::subgaussian;
    m.n_arms = n;
    m.delta = delta;
    m.sigma = sigma;
    m.k = k;
    m.c = c;
    return m;
  }

  /// Per-step factors (a, b) with mean radius = a / sqrt(T), variance radius = b / sqrt(T).
  struct StepFactors {
    double mean;
    double var;
  };

  StepFactors at(std::uint64_t t) const {
    if (kind == Kind::bounded) {
      const double f = scale * std::sqrt(bounded_log_term(t, n_arms, delta) / 2.0);
      return {f, f};
    }
    const double log_term = subg_log_term(t, n_arms, delta, k);
    const double s2 = sigma * sigma;
    return {scale * std::sqrt(2.0 * s2 * log_term), scale * std::sqrt(2.0 * c * s2 * s2 * log_term)};
  }
};

inline ConfidenceBounds bounds_at(const ArmState& state, RadiusModel::StepFactors f) {
  const double inv_sqrt_t = 1.0 / std::sqrt(static_cast<double>(state.pulls));
  return bounds(state, f.mean * inv_sqrt_t, f.var * inv_sqrt_t);
}

}  // namespace vabai
