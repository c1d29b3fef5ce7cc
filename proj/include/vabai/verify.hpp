#pragma once

// Fast property suite behind `vabai_cli verify`, plus the confidence-coverage
// observer it shares with the acceptance checks.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "vabai/experiments.hpp"
#include "vabai/hardness.hpp"
#include "vabai/reference.hpp"
#include "vabai/valucb.hpp"

namespace vabai {

/// Records whether any refreshed bound ever excluded the true mean or variance.
struct CoverageObserver {
  const GroundTruth* gt = nullptr;
  bool violated = false;

  void operator()(const StepView& v) {
    for (ArmIndex i : v.previously_possibly_feasible) {
      const ConfidenceBounds& b = v.bounds[i];
      const double mu = gt->means[i];
      const double var = gt->variances[i];
      if (mu < b.l_mu || mu > b.u_mu || var < b.l_var || var > b.u_var) violated = true;
    }
  }
};

struct CoverageResult {
  std::uint64_t trials = 0;
  std::uint64_t violating_trials = 0;
  double limit = 0.0;  // allowed violating fraction: delta/2 plus 3 binomial sd

  double fraction() const { return static_cast<double>(violating_trials) / static_cast<double>(trials); }
  bool passed() const { return fraction() <= limit; }
};

inline double coverage_limit(double delta, std::uint64_t trials) {
  const double p = delta / 2.0;
  return p + 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

/// VA-LUCB runs on one catalog entry, counting trials with any coverage
/// violation. `radius_scale` != 1 is the negative-control fixture.
inline CoverageResult coverage_experiment(const CatalogEntry& entry, double delta, std::uint64_t trials,
                                          std::uint64_t master_seed, double radius_scale = 1.0) {
  CoverageResult r;
  r.trials = trials;
  r.limit = coverage_limit(delta, trials);
  EngineOptions opt;
  opt.radius_scale = radius_scale;
  opt.max_time_steps = 50'000'000;
  for (std::uint64_t k = 0; k < trials; ++k) {
    RandomStream rng(trial_seed(master_seed, k, "coverage/" + entry.case_id, entry.j));
    CoverageObserver obs{&entry.ground_truth};
    run_valucb(entry.instance, delta, rng, opt, obs);
    r.violating_trials += obs.violated ? 1 : 0;
  }
  return r;
}

inline std::vector<reference::Arm> reference_arms(const CatalogEntry& e) {
  std::vector<reference::Arm> arms;
  for (const Moments& m : e.arm_moments) arms.push_back({m.mean, m.variance});
  return arms;
}

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

struct PropertyOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Every catalog entry builds, its Beta arms reproduce the table moments, and
/// its derived ground truth agrees with the table-level moments.
inline PropertyOutcome check_catalog_validity() {
  PropertyOutcome out{"catalog_validity", true, ""};
  std::size_t count = 0;
  double worst = 0.0;
  try {
    for (const CatalogEntry& e : full_catalog()) {
      ++count;
      for (std::size_t i = 0; i < e.arm_moments.size(); ++i) {
        const Moments m = moments(e.instance.arm(i));
        worst = std::max({worst, std::abs(m.mean - e.arm_moments[i].mean),
                          std::abs(m.variance - e.arm_moments[i].variance)});
      }
      const bool expect_feasible = e.case_id != "3";
      const ArmIndex expect_best = e.case_id == "cmp" ? 4 : 0;
      if (e.ground_truth.feasible != expect_feasible || (expect_feasible && e.ground_truth.i_star != expect_best)) {
        out.passed = false;
        out.detail = e.case_id + " j=" + std::to_string(e.j) + ": unexpected feasibility or best arm";
        return out;
      }
    }
  } catch (const Error& err) {
    out.passed = false;
    out.detail = err.what();
    return out;
  }
  if (worst > 1e-12) {
    out.passed = false;
    out.detail = "moment round trip error " + sci(worst);
    return out;
  }
  out.detail = std::to_string(count) + " entries";
  return out;
}

/// Module hardness against the brute-force reference on every catalog entry.
inline PropertyOutcome check_hardness_oracle(reference::Options ref_opt = {}, double tol = 1e-12) {
  PropertyOutcome out{"hardness_oracle", true, ""};
  long double worst = 0.0L;
  std::string where;
  for (const CatalogEntry& e : full_catalog()) {
    const auto arms = reference_arms(e);
    const long double th = e.instance.sigma_bar_sq();
    auto note = [&](long double d, const std::string& what) {
      if (d > worst) {
        worst = d;
        where = e.case_id + " j=" + std::to_string(e.j) + " " + what;
      }
    };
    note(reference::relative_difference(h_va(e.ground_truth), reference::h_va(arms, th, ref_opt)), "h_va");
    if (e.ground_truth.feasible) {
      note(reference::relative_difference(h1(e.ground_truth), *reference::h1(arms, th)), "h1");
      const double eps_mu = e.ground_truth.mean_gaps[*e.ground_truth.i_star];
      const double eps_v = 0.01;
      for (ArmIndex i = 0; i < e.instance.size(); ++i)
        note(reference::relative_difference(david_ci(e.ground_truth, eps_mu, eps_v, i),
                                            *reference::david_ci(arms, th, eps_mu, eps_v, i)),
             "C_" + std::to_string(i));
    }
  }
  out.passed = worst <= tol;
  out.detail = "max relative difference " + sci(static_cast<double>(worst)) +
               (where.empty() ? "" : " at " + where);
  return out;
}

inline PropertyOutcome check_coverage(std::uint64_t trials, std::uint64_t master_seed, double radius_scale = 1.0) {
  const CatalogEntry e = catalog_instance("1a", 10);
  const CoverageResult r = coverage_experiment(e, 0.1, trials, master_seed, radius_scale);
  PropertyOutcome out{"confidence_coverage", r.passed(), ""};
  out.detail = std::to_string(r.violating_trials) + "/" + std::to_string(r.trials) +
               " trials with a violation, limit fraction " + std::to_string(r.limit);
  return out;
}

}  // namespace vabai
