#pragma once

// Closed-form hardness quantities and the lower bound.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "vabai/baselines.hpp"
#include "vabai/core.hpp"
#include "vabai/instance.hpp"

namespace vabai {

/// The four summands of H_VA, in order:
///   [0] min{D*/2, D*^v}^-2               (i*, absent when infeasible)
///   [1] sum over F n S of (D_i/2)^-2
///   [2] sum over infeasible n R of (D_i^v)^-2
///   [3] sum over infeasible n S of max{D_i/2, D_i^v}^-2
inline std::array<double, 4> h_va_terms(const GroundTruth& gt) {
  std::array<double, 4> terms{0.0, 0.0, 0.0, 0.0};
  const ArmSet infeasible = gt.infeasible_set();
  if (gt.i_star) {
    const ArmIndex s = *gt.i_star;
    terms[0] = ext_inverse_sq(std::min(gt.mean_gaps[s] / 2.0, gt.var_gaps[s]));
  }
  for (ArmIndex i : gt.feasible_set & gt.suboptimal_set) terms[1] += ext_inverse_sq(gt.mean_gaps[i] / 2.0);
  for (ArmIndex i : infeasible & gt.risky_set) terms[2] += ext_inverse_sq(gt.var_gaps[i]);
  for (ArmIndex i : infeasible & gt.suboptimal_set)
    terms[3] += ext_inverse_sq(std::max(gt.mean_gaps[i] / 2.0, gt.var_gaps[i]));
  return terms;
}

inline double h_va(const GroundTruth& gt) {
  const auto t = h_va_terms(gt);
  return t[0] + t[1] + t[2] + t[3];
}

/// Classical BAI hardness: sum over i != i* of D_i^-2.
inline double h1(const GroundTruth& gt) {
  if (!gt.i_star) throw Error(ErrorKind::no_feasible_arm, "no feasible arm: H1 undefined");
  double sum = 0.0;
  for (ArmIndex i = 0; i < gt.size(); ++i)
    if (i != *gt.i_star) sum += ext_inverse_sq(gt.mean_gaps[i]);
  return sum;
}

struct SubGaussianHardness {
  double h;
  double h_with_floor;  // max{h, N}
};

inline SubGaussianHardness h_va_sigma(const GroundTruth& gt, double sigma, double c = kSubgC) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::invalid_argument, "sigma must be positive");
  const double a = 2.0 * sigma * sigma;
  const double b = 2.0 * c * sigma * sigma * sigma * sigma;
  const ArmSet infeasible = gt.infeasible_set();
  double h = 0.0;
  if (gt.i_star) {
    const ArmIndex s = *gt.i_star;
    h += std::max(a * ext_inverse_sq(gt.mean_gaps[s] / 2.0), b * ext_inverse_sq(gt.var_gaps[s]));
  }
  for (ArmIndex i : gt.feasible_set & gt.suboptimal_set) h += a * ext_inverse_sq(gt.mean_gaps[i] / 2.0);
  for (ArmIndex i : infeasible & gt.risky_set) h += b * ext_inverse_sq(gt.var_gaps[i]);
  for (ArmIndex i : infeasible & gt.suboptimal_set)
    h += std::min(a * ext_inverse_sq(gt.mean_gaps[i] / 2.0), b * ext_inverse_sq(gt.var_gaps[i]));
  return {h, std::max(h, static_cast<double>(gt.size()))};
}

/// Per-arm complexity of RiskAverse-UCB-BAI.
inline double david_ci(const GroundTruth& gt, double eps_mu, double eps_v, ArmIndex i) {
  if (!gt.i_star) throw Error(ErrorKind::no_feasible_arm, "no feasible arm: C_i undefined");
  if (!(eps_mu > 0.0 && eps_v > 0.0)) throw Error(ErrorKind::invalid_argument, "accuracy parameters must be positive");
  const double mu_star = gt.means[*gt.i_star];
  const double excess = gt.variances[i] - gt.sigma_bar_sq;
  const double mean_entry = ext_inverse_sq(std::max(0.0, mu_star - gt.means[i]));
  const double var_entry = 4.0 * ext_inverse_sq(std::max(0.0, excess));
  const double accuracy_entry =
      std::max(1.0 / (eps_mu * eps_mu), 4.0 * ext_inverse_sq(std::max(0.0, eps_v - excess)));
  return std::min({mean_entry, var_entry, accuracy_entry});
}

struct LowerBound {
  double c;
  double bound;
};

/// c = min{ a(1/4 - s), a/8, (1 - mu*)/8 } with a the smaller feasibility
/// root; the last entry is dropped on an infeasible instance.
/// bound = c * H_VA * ln(1/(2.4 delta)).
inline LowerBound lower_bound(const GroundTruth& gt, double sigma_bar_sq, double delta) {
  const FeasibilityRoots r = bernoulli_feasibility_roots(sigma_bar_sq);
  double c = std::min(r.a_under * (0.25 - sigma_bar_sq), r.a_under / 8.0);
  if (gt.i_star) c = std::min(c, (1.0 - gt.means[*gt.i_star]) / 8.0);
  return {c, c * h_va(gt) * std::log(1.0 / (2.4 * delta))};
}

/// h ln(h/delta).
inline double scale(double h, double delta) {
  if (!(h > 0.0) || !(delta > 0.0 && delta < 1.0) || !(h / delta > 1.0))
    throw Error(ErrorKind::scale_undefined, "scale undefined: need h > 0, delta in (0,1), h/delta > 1");
  return h * std::log(h / delta);
}

struct HardnessReport {
  std::array<double, 4> terms{};
  double h_va = 0.0;
  std::optional<double> h1;
  std::optional<LowerBound> lower;
  std::optional<double> scale;
};

/// Everything that is defined for the instance: H1 needs a feasible arm, the
/// lower bound needs sigma_bar_sq in (0, 1/4), the scale needs H_VA/delta > 1.
inline HardnessReport hardness_report(const GroundTruth& gt, double delta) {
  HardnessReport r;
  r.terms = h_va_terms(gt);
  r.h_va = r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3];
  if (gt.i_star) r.h1 = h1(gt);
  if (gt.sigma_bar_sq > 0.0 && gt.sigma_bar_sq < 0.25) r.lower = lower_bound(gt, gt.sigma_bar_sq, delta);
  if (std::isfinite(r.h_va) && r.h_va / delta > 1.0) r.scale = scale(r.h_va, delta);
  return r;
}

}  // namespace vabai
