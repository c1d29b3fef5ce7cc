#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "vabai/experiments.hpp"

using namespace vabai;

TEST(Catalog, SizeAndRanges) {
  const auto all = full_catalog();
  EXPECT_EQ(all.size(), 120u);
  EXPECT_EQ(catalog_j_range("cmp"), (std::pair<int, int>{1, 10}));
  EXPECT_THROW(catalog_instance("cmp", 0), Error);
  EXPECT_THROW(catalog_instance("1a", 11), Error);
  EXPECT_THROW(catalog_instance("5", 1), Error);
}

TEST(Catalog, Case1aZero) {
  const CatalogEntry e = catalog_instance("1a", 0);
  ASSERT_EQ(e.instance.size(), 20u);
  EXPECT_EQ(e.instance.sigma_bar_sq(), 0.25);
  EXPECT_EQ(e.arm_moments[0].mean, 0.7);
  EXPECT_EQ(e.arm_moments[0].variance, 0.09);
  EXPECT_NEAR(e.arm_moments[1].mean, 0.69, 1e-15);
  for (std::size_t i = 2; i < 20; ++i) EXPECT_EQ(e.arm_moments[i].mean, 0.2);
  EXPECT_EQ(e.instance.subg_proxy(), 0.5);
}

TEST(Catalog, Case3Ten) {
  const CatalogEntry e = catalog_instance("3", 10);
  EXPECT_FALSE(e.ground_truth.feasible);
  EXPECT_EQ(e.instance.sigma_bar_sq(), 0.04);
  for (const Moments& m : e.arm_moments) {
    EXPECT_EQ(m.mean, 0.55);
    EXPECT_NEAR(m.variance, 0.04 + 0.01 * std::pow(1.2, 10), 1e-15);
    EXPECT_NEAR(m.variance, 0.1019, 1e-4);
  }
}

TEST(Catalog, ComparisonTen) {
  const CatalogEntry e = catalog_instance("cmp", 10);
  ASSERT_EQ(e.instance.size(), 10u);
  EXPECT_EQ(e.instance.sigma_bar_sq(), 0.2);
  for (std::size_t i = 5; i < 10; ++i) EXPECT_NEAR(e.arm_moments[i].variance, 0.203, 1e-15);
  EXPECT_NEAR(e.arm_moments[5].mean, 0.4, 1e-15);
  EXPECT_NEAR(e.arm_moments[9].mean, 0.6, 1e-15);
  ASSERT_TRUE(e.baseline_eps_v);
  EXPECT_NEAR(*e.baseline_eps_v, 0.003, 1e-15);
  EXPECT_EQ(e.ground_truth.i_star, ArmIndex{4});
}

TEST(Catalog, GapColumnsFollowTableFormulas) {
  for (int j = 0; j <= 10; ++j) {
    const double g12 = std::pow(1.2, j), g11 = std::pow(1.1, j);
    const GroundTruth a = catalog_instance("1a", j).ground_truth;
    EXPECT_NEAR(a.mean_gaps[0], 0.01 * g12, 1e-12);
    EXPECT_NEAR(a.var_gaps[0], 0.16, 1e-12);
    const GroundTruth b = catalog_instance("1b", j).ground_truth;
    EXPECT_NEAR(b.var_gaps[0], 0.01 * g12, 1e-12);
    EXPECT_NEAR(b.mean_gaps[0], 0.02, 1e-12);
    const GroundTruth d = catalog_instance("1d", j).ground_truth;
    EXPECT_NEAR(d.mean_gaps[0], 0.02 * g11, 1e-12);
    const GroundTruth three = catalog_instance("3", j).ground_truth;
    for (double v : three.var_gaps) EXPECT_NEAR(v, 0.01 * g12, 1e-12);
    const GroundTruth fb = catalog_instance("4b", j).ground_truth;
    EXPECT_NEAR(fb.var_gaps[1], 0.05 * g11, 1e-12);
    const GroundTruth fc = catalog_instance("4c", j).ground_truth;
    EXPECT_NEAR(fc.mean_gaps[1], 0.09 * g11, 1e-12);
    EXPECT_LE(fc.mean_gaps[0] / 2.0, fc.var_gaps[0] + 1e-12);
  }
}

TEST(Catalog, ComparisonHardnessIncreasesWithJ) {
  double prev = 0.0;
  for (int j = 1; j <= 10; ++j) {
    const CatalogEntry e = catalog_instance("cmp", j);
    for (std::size_t i = 5; i < 10; ++i) EXPECT_NEAR(e.ground_truth.var_gaps[i], 0.033 - 0.003 * j, 1e-12);
    const double h = h_va(e.ground_truth);
    EXPECT_GT(h, prev);
    prev = h;
  }
}

TEST(Seeds, StableAndDistinct) {
  EXPECT_EQ(trial_seed(42, 3, "1a", 4), trial_seed(42, 3, "1a", 4));
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 50; ++k)
    for (const auto& c : catalog_cases())
      for (int j = 0; j <= 10; ++j) seen.insert(trial_seed(7, k, c, j));
  EXPECT_EQ(seen.size(), 50u * 11u * 11u);
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Algorithms, NamesRoundTrip) {
  for (auto a : {AlgorithmId::valucb, AlgorithmId::valucb_subg, AlgorithmId::riskaverse, AlgorithmId::va_uniform})
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_THROW(parse_algorithm("lucb"), Error);
}

TEST(ScoreSuccess, Cases) {
  GroundTruth feasible;
  feasible.feasible = true;
  feasible.i_star = 2;
  RunResult r;
  r.status = RunStatus::stopped;
  r.feasible_flag = true;
  r.recommended_arm = 2;
  EXPECT_TRUE(score_success(r, feasible));
  r.recommended_arm = 1;
  EXPECT_FALSE(score_success(r, feasible));
  GroundTruth infeasible;
  RunResult none;
  none.status = RunStatus::stopped;
  EXPECT_TRUE(score_success(none, infeasible));
  none.status = RunStatus::capped;
  EXPECT_FALSE(score_success(none, infeasible));
}

TEST(RunTrials, DeterministicAndParallelMatchesSerial) {
  const CatalogEntry e = catalog_instance("1a", 10);
  TrialConfig cfg;
  cfg.delta = 0.1;
  cfg.n_trials = 6;
  cfg.master_seed = 9;
  const AggregateResult a = run_trials(e, cfg);
  const AggregateResult b = run_trials(e, cfg);
  cfg.parallel = 3;
  const AggregateResult c = run_trials(e, cfg);
  for (const AggregateResult* x : {&b, &c}) {
    EXPECT_EQ(x->mean_tau, a.mean_tau);
    EXPECT_EQ(x->std_tau, a.std_tau);
    ASSERT_EQ(x->trials.size(), a.trials.size());
    for (std::size_t k = 0; k < a.trials.size(); ++k) {
      EXPECT_EQ(x->trials[k].tau, a.trials[k].tau);
      EXPECT_EQ(x->trials[k].seed, a.trials[k].seed);
    }
  }
  EXPECT_GT(a.std_tau, 0.0);
  EXPECT_EQ(a.hardness.h_va, h_va(e.ground_truth));

  cfg.n_trials = 1;
  EXPECT_EQ(run_trials(e, cfg).std_tau, 0.0);
  cfg.n_trials = 0;
  EXPECT_THROW(run_trials(e, cfg), Error);
}

TEST(RunTrials, ConfigurationErrorsSurfaceBeforeRunning) {
  TrialConfig cfg;
  cfg.algorithm = AlgorithmId::riskaverse;
  EXPECT_THROW(run_trials(catalog_instance("3", 0), cfg), Error);
  cfg.algorithm = AlgorithmId::valucb;
  cfg.delta = 0.0;
  EXPECT_THROW(run_trials(catalog_instance("1a", 0), cfg), Error);
}

TEST(RunTrials, CappedTrialsCountAsFailures) {
  TrialConfig cfg;
  cfg.n_trials = 3;
  cfg.engine.max_time_steps = 5;
  const AggregateResult a = run_trials(catalog_instance("1a", 0), cfg);
  EXPECT_EQ(a.capped, 3u);
  EXPECT_EQ(a.success_rate, 0.0);
}
