#pragma once

// Bandit instances and their analytic ground truth.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "vabai/core.hpp"
#include "vabai/distributions.hpp"

namespace vabai {

/// Arms plus the variance threshold. Gaussian arms require a sub-Gaussian
/// proxy that dominates every Gaussian's standard deviation.
class BanditInstance {
 public:
  BanditInstance(std::vector<DistributionSpec> arms, double sigma_bar_sq,
                 std::optional<double> subg_proxy = std::nullopt, double eps_v = 0.0)
      : arms_(std::move(arms)), sigma_bar_sq_(sigma_bar_sq), subg_proxy_(subg_proxy), eps_v_(eps_v) {
    if (arms_.size() < 2) throw Error(ErrorKind::invalid_argument, "instance needs at least 2 arms");
    if (arms_.size() > ArmSet::kMaxArms)
      throw Error(ErrorKind::invalid_argument, "instance supports at most 64 arms");
    if (!(sigma_bar_sq_ > 0.0) || !std::isfinite(sigma_bar_sq_))
      throw Error(ErrorKind::invalid_argument, "sigma_bar_sq must be positive");
    if (!(eps_v_ >= 0.0)) throw Error(ErrorKind::invalid_argument, "eps_v must be nonnegative");
    if (subg_proxy_ && !(*subg_proxy_ > 0.0))
      throw Error(ErrorKind::invalid_argument, "sub-Gaussian proxy must be positive");
    for (const auto& a : arms_) {
      if (!a.is_gaussian()) continue;
      if (!subg_proxy_)
        throw Error(ErrorKind::missing_subg_proxy,
                    "missing sub-Gaussian proxy: instance has Gaussian arms");
      if (std::get<Gaussian>(a.law()).sigma > *subg_proxy_)
        throw Error(ErrorKind::invalid_argument,
                    "Gaussian arm std exceeds the sub-Gaussian proxy");
    }
  }

  std::size_t size() const { return arms_.size(); }
  const std::vector<DistributionSpec>& arms() const { return arms_; }
  const DistributionSpec& arm(ArmIndex i) const { return arms_.at(i); }
  double sigma_bar_sq() const { return sigma_bar_sq_; }
  std::optional<double> subg_proxy() const { return subg_proxy_; }
  double eps_v() const { return eps_v_; }

  bool all_bounded() const {
    for (const auto& a : arms_)
      if (!a.bounded()) return false;
    return true;
  }

 private:
  std::vector<DistributionSpec> arms_;
  double sigma_bar_sq_;
  std::optional<double> subg_proxy_;
  double eps_v_;
};

/// Analytic truth for an instance.
///
/// mean_gaps: for i != i*, mu_{i*} - mu_i (negative for risky arms); for i*
/// the gap of i**, or +inf when no arm is suboptimal. On an infeasible
/// instance every mean gap is recorded as 0, following the catalog tables.
struct GroundTruth {
  std::vector<double> means;
  std::vector<double> variances;
  double sigma_bar_sq = 0.0;
  bool feasible = false;
  ArmSet feasible_set;
  ArmSet suboptimal_set;
  ArmSet risky_set;
  std::optional<ArmIndex> i_star;
  std::optional<ArmIndex> i_star_star;
  std::vector<double> mean_gaps;
  std::vector<double> var_gaps;
  double separator = -kInf;

  std::size_t size() const { return means.size(); }
  ArmSet infeasible_set() const { return ArmSet::all(size()) - feasible_set; }
};

inline GroundTruth derive_ground_truth(const BanditInstance& instance) {
  const std::size_t n = instance.size();
  GroundTruth gt;
  gt.sigma_bar_sq = instance.sigma_bar_sq();
  gt.means.resize(n);
  gt.variances.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Moments m = moments(instance.arm(i));
    gt.means[i] = m.mean;
    gt.variances[i] = m.variance;
    if (m.variance <= gt.sigma_bar_sq) gt.feasible_set.insert(i);
  }
  gt.feasible = !gt.feasible_set.empty();

  gt.var_gaps.resize(n);
  for (std::size_t i = 0; i < n; ++i) gt.var_gaps[i] = std::abs(gt.variances[i] - gt.sigma_bar_sq);

  gt.mean_gaps.assign(n, 0.0);
  if (!gt.feasible) {
    gt.risky_set = ArmSet::all(n);
    return gt;
  }

  ArmIndex best = gt.feasible_set.front();
  for (ArmIndex i : gt.feasible_set)
    if (gt.means[i] > gt.means[best]) best = i;
  for (ArmIndex i : gt.feasible_set)
    if (i != best && gt.means[i] == gt.means[best])
      throw Error(ErrorKind::degenerate_best_arm,
                  "degenerate best arm: feasible arms " + std::to_string(best) + " and " +
                      std::to_string(i) + " share the maximal mean");
  if (instance.eps_v() == 0.0 && gt.variances[best] == gt.sigma_bar_sq)
    throw Error(ErrorKind::degenerate_best_arm,
                "degenerate best arm: variance of the best feasible arm equals the threshold");
  gt.i_star = best;

  const double mu_star = gt.means[best];
  for (std::size_t i = 0; i < n; ++i) {
    if (gt.means[i] < mu_star) gt.suboptimal_set.insert(i);
    else gt.risky_set.insert(i);
  }
  if (!gt.suboptimal_set.empty()) {
    ArmIndex second = gt.suboptimal_set.front();
    for (ArmIndex i : gt.suboptimal_set)
      if (gt.means[i] > gt.means[second]) second = i;
    gt.i_star_star = second;
    gt.separator = 0.5 * (mu_star + gt.means[second]);
  }
  for (std::size_t i = 0; i < n; ++i) gt.mean_gaps[i] = mu_star - gt.means[i];
  gt.mean_gaps[best] = gt.i_star_star ? mu_star - gt.means[*gt.i_star_star] : kInf;
  return gt;
}

struct FeasibilityRoots {
  double a_under;
  double a_bar;
};

/// Both roots of a(1-a) = sigma_bar_sq; Bernoulli(p) is infeasible iff
/// p lies strictly between them.
inline FeasibilityRoots bernoulli_feasibility_roots(double sigma_bar_sq) {
  if (!(sigma_bar_sq > 0.0 && sigma_bar_sq < 0.25))
    throw Error(ErrorKind::domain_error, "feasibility roots need sigma_bar_sq in (0, 1/4)");
  const double a_bar = (1.0 + std::sqrt(1.0 - 4.0 * sigma_bar_sq)) / 2.0;
  // product of the roots is sigma_bar_sq; avoids cancellation in (1 - r) / 2
  return {sigma_bar_sq / a_bar, a_bar};
}

}  // namespace vabai
