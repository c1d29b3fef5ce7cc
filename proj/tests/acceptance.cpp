// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
// (detail lines are indented) and exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vabai/experiments.hpp"
#include "vabai/hardness.hpp"
#include "vabai/io.hpp"
#include "vabai/reference.hpp"
#include "vabai/verify.hpp"

using namespace vabai;

namespace {

constexpr std::uint64_t kSeed = 20240611;

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

double pac_floor(double delta, int n) { return 1.0 - delta - 3.0 * std::sqrt(delta * (1.0 - delta) / n); }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Inline {
  std::string name;
  BanditInstance instance;
  GroundTruth gt;

  Inline(std::string n, BanditInstance inst)
      : name(std::move(n)), instance(std::move(inst)), gt(derive_ground_truth(instance)) {}
  TrialTarget target() const { return {name, 0, &instance, &gt, std::nullopt}; }
};

Inline three_arm() {
  return Inline("bern3",
                BanditInstance({DistributionSpec::bernoulli(0.9), DistributionSpec::bernoulli(0.5),
                                DistributionSpec::bernoulli(0.1)},
                               0.2));
}

Inline two_gaussian() {
  return Inline("gauss2",
                BanditInstance({DistributionSpec::gaussian(0.9, 0.1), DistributionSpec::gaussian(0.1, 0.1)},
                               0.04, 0.5));
}

AggregateResult run(const TrialTarget& t, AlgorithmId algo, double delta, std::uint64_t trials,
                    VarianceStopTest ra_test = VarianceStopTest::sample_variance) {
  TrialConfig cfg;
  cfg.algorithm = algo;
  cfg.delta = delta;
  cfg.n_trials = trials;
  cfg.master_seed = kSeed;
  cfg.parallel = workers();
  cfg.riskaverse_variance_test = ra_test;
  return run_trials(t, cfg);
}

AggregateResult run(const CatalogEntry& e, AlgorithmId algo, double delta, std::uint64_t trials,
                    VarianceStopTest ra_test = VarianceStopTest::sample_variance) {
  return run(target_of(e), algo, delta, trials, ra_test);
}

struct Report {
  int failures = 0;
  std::vector<AggregateResult> all;

  void line(int id, const std::string& name, bool pass, const std::string& detail) {
    failures += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail << std::endl;
  }
  void info(const std::string& s) { std::cout << "    " << s << std::endl; }
};

// ---------------------------------------------------------------------------

void delta_pac(Report& rep) {
  const double delta = 0.1;
  const int n = 200;
  const Inline bern = three_arm();
  const AggregateResult a = run(catalog_instance("3", 10), AlgorithmId::valucb, delta, n);
  const AggregateResult b = run(bern.target(), AlgorithmId::valucb, delta, n);
  rep.all.push_back(a);
  rep.all.push_back(b);
  const double floor = pac_floor(delta, n);
  rep.line(1, "delta_pac", a.success_rate >= floor && b.success_rate >= floor,
           "(3,10) " + num(a.success_rate) + ", bern3 " + num(b.success_rate) + ", floor " + num(floor));
}

void complexity_band(Report& rep) {
  const double delta = 0.05;
  bool ok = true;
  std::ostringstream detail;
  auto check = [&](const std::string& c, int j) {
    const AggregateResult a = run(catalog_instance(c, j), AlgorithmId::valucb, delta, 20);
    rep.all.push_back(a);
    const double ratio = a.mean_tau / *a.hardness.scale;
    ok = ok && ratio >= 0.8 && ratio <= 3.5;
    detail << " (" << c << "," << j << ")=" << num(ratio);
  };
  for (int j = 6; j <= 10; ++j) check("3", j);
  for (int j = 8; j <= 10; ++j) check("1a", j);
  rep.line(2, "complexity_band", ok, "mean tau / scale in [0.8, 3.5]:" + detail.str());
}

void monotone_1a(Report& rep) {
  std::vector<double> taus;
  std::ostringstream detail;
  for (int j = 4; j <= 10; ++j) {
    const AggregateResult a = run(catalog_instance("1a", j), AlgorithmId::valucb, 0.05, 20);
    rep.all.push_back(a);
    taus.push_back(a.mean_tau);
    detail << " " << num(a.mean_tau);
  }
  bool ok = true;
  for (std::size_t k = 1; k < taus.size(); ++k) ok = ok && taus[k] < taus[k - 1];
  rep.line(3, "monotone_1a", ok, "mean tau j=4..10:" + detail.str());
}

void flat_1b(Report& rep) {
  std::vector<double> taus;
  for (int j : {0, 5, 10}) {
    const AggregateResult a = run(catalog_instance("1b", j), AlgorithmId::valucb, 0.05, 20);
    rep.all.push_back(a);
    taus.push_back(a.mean_tau);
  }
  const auto [lo, hi] = std::minmax_element(taus.begin(), taus.end());
  const double spread = *hi / *lo;
  rep.line(4, "flat_1b", spread <= 1.25,
           "mean tau j=0,5,10: " + num(taus[0]) + " " + num(taus[1]) + " " + num(taus[2]) + ", max/min " +
               num(spread));
}

void comparison(Report& rep) {
  const double delta = 0.05;
  bool ok = true;
  std::ostringstream detail;
  std::vector<std::string> variant;
  for (int j : {1, 5, 10}) {
    const CatalogEntry e = catalog_instance("cmp", j);
    const AggregateResult va = run(e, AlgorithmId::valucb, delta, 20);
    const AggregateResult ra = run(e, AlgorithmId::riskaverse, delta, 20);
    const AggregateResult un = run(e, AlgorithmId::va_uniform, delta, 20);
    const AggregateResult ub = run(e, AlgorithmId::riskaverse, delta, 20, VarianceStopTest::upper_bound);
    rep.all.push_back(va);
    rep.all.push_back(ra);
    rep.all.push_back(un);
    ok = ok && va.mean_tau < ra.mean_tau && va.mean_tau < un.mean_tau;
    if (j == 10) ok = ok && va.mean_tau <= 0.8 * ra.mean_tau;
    detail << " j=" << j << " valucb " << num(va.mean_tau) << " (succ " << num(va.success_rate) << ") riskaverse "
           << num(ra.mean_tau) << " (succ " << num(ra.success_rate) << ") va_uniform " << num(un.mean_tau)
           << " (succ " << num(un.success_rate) << ");";
    variant.push_back("j=" + std::to_string(j) + " riskaverse with variance UCB stop: mean tau " +
                      num(ub.mean_tau) + " succ " + num(ub.success_rate) + ", valucb/riskaverse " +
                      num(va.mean_tau / ub.mean_tau));
  }
  rep.line(5, "comparison_dominance", ok, detail.str());
  for (const auto& v : variant) rep.info(v);
}

void oracle(Report& rep) {
  const PropertyOutcome o = check_hardness_oracle();
  rep.line(6, "hardness_oracle", o.passed, std::to_string(full_catalog().size()) + " entries, " + o.detail);
}

void inactive_identity(Report& rep) {
  std::mt19937_64 gen(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int rep_i = 0; rep_i < 100; ++rep_i) {
    const std::size_t n = 2 + static_cast<std::size_t>(u(gen) * 19.0);
    std::vector<DistributionSpec> arms;
    std::vector<double> means;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = 0.02 + 0.96 * u(gen);
      const double v = (0.02 + 0.95 * u(gen)) * m * (1.0 - m);
      arms.push_back(rep_i % 3 == 0 ? DistributionSpec::bernoulli(m) : beta_from_moments(m, v));
      means.push_back(m);
    }
    const GroundTruth gt = derive_ground_truth(BanditInstance(arms, 0.9));
    // direct arithmetic on the arm means
    const double best = *std::max_element(means.begin(), means.end());
    double second = -1.0, sum = 0.0;
    for (double m : means) {
      if (m < best) {
        second = std::max(second, m);
        sum += 1.0 / ((best - m) * (best - m));
      }
    }
    const double expect = 4.0 * (1.0 / ((best - second) * (best - second)) + sum);
    worst = std::max(worst, std::abs(h_va(gt) - expect) / expect);
  }
  rep.line(7, "inactive_constraint_identity", worst <= 1e-12, "100 instances, max relative difference " + sci(worst));
}

void lower_bound_sanity(Report& rep, double bern3_mean_tau) {
  const Inline bern = three_arm();
  const LowerBound lb = lower_bound(bern.gt, 0.2, 0.1);
  const long double a = (1.0L - std::sqrt(0.2L)) / 2.0L;
  const long double c = std::min({a * (0.25L - 0.2L), a / 8.0L, (1.0L - 0.9L) / 8.0L});
  const std::vector<reference::Arm> arms{{0.9L, 0.09L}, {0.5L, 0.25L}, {0.1L, 0.09L}};
  const long double bound = c * reference::h_va(arms, 0.2L) * std::log(1.0L / 0.24L);
  const long double dc = reference::relative_difference(lb.c, c);
  const long double db = reference::relative_difference(lb.bound, bound);
  const bool ok = dc <= 1e-12L && db <= 1e-12L && lb.bound <= bern3_mean_tau;
  rep.line(8, "lower_bound", ok,
           "c " + num(lb.c) + " bound " + num(lb.bound) + " vs mean tau " + num(bern3_mean_tau) +
               ", regression diffs " + sci(static_cast<double>(dc)) + " " + sci(static_cast<double>(db)));
}

void coverage(Report& rep) {
  const CoverageResult r = coverage_experiment(catalog_instance("1a", 10), 0.1, 200, kSeed);
  rep.line(9, "confidence_coverage", r.passed(),
           std::to_string(r.violating_trials) + "/200 trials with a violation, limit fraction " + num(r.limit));
}

void subgaussian(Report& rep) {
  const std::uint64_t t0 = warmup_length_T0(2, 0.05);
  const Inline g = two_gaussian();
  const AggregateResult a = run(g.target(), AlgorithmId::valucb_subg, 0.1, 100);
  rep.all.push_back(a);
  rep.line(10, "subgaussian", t0 == 38 && a.success_rate >= 0.836,
           "T0 " + std::to_string(t0) + ", success " + num(a.success_rate) + " over 100 trials, mean tau " +
               num(a.mean_tau));
}

void determinism(Report& rep) {
  // rerun a representative slice: both delta-PAC targets and the cmp j=1 triple
  std::vector<AggregateResult> first, second;
  const Inline bern = three_arm();
  const CatalogEntry cmp1 = catalog_instance("cmp", 1);
  const CatalogEntry three = catalog_instance("3", 10);
  for (auto* out : {&first, &second}) {
    out->push_back(run(three, AlgorithmId::valucb, 0.1, 200));
    out->push_back(run(bern.target(), AlgorithmId::valucb, 0.1, 200));
    for (auto algo : {AlgorithmId::valucb, AlgorithmId::riskaverse, AlgorithmId::va_uniform})
      out->push_back(run(cmp1, algo, 0.05, 20));
  }
  const std::string a = io::trials_csv(first);
  const std::string b = io::trials_csv(second);
  // the first two aggregates also appeared earlier in this process
  const std::string earlier = io::trials_csv({rep.all[0], rep.all[1]});
  const std::string again = io::trials_csv({first[0], first[1]});
  const bool ok = a == b && earlier == again;
  rep.line(11, "determinism", ok, std::to_string(a.size()) + " CSV bytes identical across reruns");
}

}  // namespace

int main() {
  std::cout << "acceptance: master seed " << kSeed << ", " << workers() << " worker thread(s)" << std::endl;
  Report rep;
  const auto start = std::chrono::steady_clock::now();
  try {
    delta_pac(rep);
    const double bern3_tau = rep.all[1].mean_tau;
    complexity_band(rep);
    monotone_1a(rep);
    flat_1b(rep);
    comparison(rep);
    oracle(rep);
    inactive_identity(rep);
    lower_bound_sanity(rep, bern3_tau);
    coverage(rep);
    subgaussian(rep);
    determinism(rep);
    io::write_atomic("acceptance_trials.csv", io::trials_csv(rep.all));
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance aborted: " << e.what() << std::endl;
    return 1;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << rep.failures << " of 11 criteria failed, " << num(secs) << " s" << std::endl;
  return rep.failures == 0 ? 0 : 1;
}
