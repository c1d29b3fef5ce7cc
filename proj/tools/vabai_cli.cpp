// vabai_cli: hardness | run | catalog | verify
//
// Exit codes: 0 all work done (and, for verify, every property passed);
// 1 a verify property failed or a run-time error occurred; 2 bad usage or
// an invalid instance/configuration.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vabai/experiments.hpp"
#include "vabai/hardness.hpp"
#include "vabai/io.hpp"
#include "vabai/verify.hpp"

namespace {

using namespace vabai;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

struct InstanceSource {
  std::string catalog_case;
  std::vector<int> js;
  bool all_j = false;
  std::string instance_file;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--catalog", catalog_case, "catalog case id (1a..4d, 3, cmp)");
    cmd->add_option("--j", js, "instance index within the case (repeatable or comma list)")->delimiter(',');
    cmd->add_flag("--all-j", all_j, "every instance index of the case");
    cmd->add_option("--instance", instance_file, "JSON instance document");
  }
};

struct ResolvedTarget {
  std::string case_id;
  std::int64_t j = 0;
  std::optional<CatalogEntry> entry;
  std::optional<BanditInstance> instance;
  std::optional<GroundTruth> gt;

  TrialTarget target() const {
    if (entry) return target_of(*entry);
    return {case_id, j, &*instance, &*gt, std::nullopt};
  }
  const GroundTruth& ground_truth() const { return entry ? entry->ground_truth : *gt; }
  std::string file_name;  // set for --instance sources

  std::string label() const {
    if (!file_name.empty()) return file_name;
    return case_id + " j=" + std::to_string(j);
  }
};

std::vector<ResolvedTarget> resolve(const InstanceSource& src) {
  const bool from_catalog = !src.catalog_case.empty();
  const bool from_file = !src.instance_file.empty();
  if (from_catalog == from_file) throw Error(ErrorKind::invalid_argument, "give exactly one of --catalog or --instance");
  std::vector<ResolvedTarget> out;
  if (from_file) {
    if (!src.js.empty() || src.all_j) throw Error(ErrorKind::invalid_argument, "--j/--all-j apply to --catalog only");
    ResolvedTarget t;
    t.case_id = "inline";
    t.file_name = std::filesystem::path(src.instance_file).filename().string();
    t.instance = io::load_instance(src.instance_file);
    t.gt = derive_ground_truth(*t.instance);
    out.push_back(std::move(t));
    return out;
  }
  std::vector<int> js = src.js;
  if (src.all_j) {
    if (!js.empty()) throw Error(ErrorKind::invalid_argument, "--j and --all-j are exclusive");
    const auto [lo, hi] = catalog_j_range(src.catalog_case);
    for (int j = lo; j <= hi; ++j) js.push_back(j);
  }
  if (js.empty()) throw Error(ErrorKind::invalid_argument, "--catalog needs --j or --all-j");
  for (int j : js) {
    ResolvedTarget t;
    t.entry = catalog_instance(src.catalog_case, j);
    t.case_id = src.catalog_case;
    t.j = j;
    out.push_back(std::move(t));
  }
  return out;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) std::cout << content;
  else io::write_atomic(out_path, content);
}

// ---------------------------------------------------------------------------

struct HardnessCmd {
  InstanceSource src;
  double delta = 0.05;
  std::string format = "text";
  std::string out;
};

std::string hardness_text(const ResolvedTarget& t, const HardnessReport& r, double delta) {
  std::ostringstream os;
  os << "instance " << t.label() << "\n";
  os << "delta " << fmt(delta) << "\n";
  os << "feasible " << (t.ground_truth().feasible ? "yes" : "no") << "\n";
  os << "h_va " << fmt(r.h_va) << "\n";
  os << "  term_best_arm " << fmt(r.terms[0]) << "\n";
  os << "  term_feasible_suboptimal " << fmt(r.terms[1]) << "\n";
  os << "  term_infeasible_risky " << fmt(r.terms[2]) << "\n";
  os << "  term_infeasible_suboptimal " << fmt(r.terms[3]) << "\n";
  if (r.h1) os << "h1 " << fmt(*r.h1) << "\n";
  if (r.lower) {
    os << "lower_bound_constant " << fmt(r.lower->c) << "\n";
    os << "lower_bound_value " << fmt(r.lower->bound) << "\n";
  }
  if (r.scale) os << "scale " << fmt(*r.scale) << "\n";
  return os.str();
}

int cmd_hardness(const HardnessCmd& c) {
  detail::check_delta(c.delta);
  std::string text;
  for (const ResolvedTarget& t : resolve(c.src)) {
    const HardnessReport r = hardness_report(t.ground_truth(), c.delta);
    text += c.format == "json" ? io::hardness_json(r, t.label(), c.delta) : hardness_text(t, r, c.delta);
  }
  emit(c.out, text);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct RunCmd {
  InstanceSource src;
  std::vector<std::string> algos{"valucb"};
  std::uint64_t trials = 20;
  double delta = 0.05;
  std::optional<std::uint64_t> seed;
  unsigned parallel = 1;
  std::uint64_t max_time_steps = 1'000'000'000;
  std::string format = "csv";
  std::string out;
  std::string riskaverse_stop = "sample_variance";
};

int cmd_run(const RunCmd& c) {
  if (!c.seed) throw Error(ErrorKind::invalid_argument, "--seed is required");
  if (c.trials < 1) throw Error(ErrorKind::invalid_argument, "--trials must be at least 1");
  detail::check_delta(c.delta);
  std::vector<AlgorithmId> algos;
  for (const auto& a : c.algos) algos.push_back(parse_algorithm(a));
  const std::vector<ResolvedTarget> targets = resolve(c.src);

  std::vector<AggregateResult> aggs;
  for (const ResolvedTarget& t : targets) {
    for (AlgorithmId a : algos) {
      TrialConfig cfg;
      cfg.algorithm = a;
      cfg.delta = c.delta;
      cfg.n_trials = c.trials;
      cfg.master_seed = *c.seed;
      cfg.parallel = c.parallel;
      cfg.engine.max_time_steps = c.max_time_steps;
      cfg.riskaverse_variance_test = c.riskaverse_stop == "upper_bound" ? VarianceStopTest::upper_bound
                                                                        : VarianceStopTest::sample_variance;
      AggregateResult agg = run_trials(t.target(), cfg);
      std::cerr << to_string(a) << " " << t.label() << ": mean_tau " << fmt(agg.mean_tau) << " std_tau "
                << fmt(agg.std_tau) << " success " << fmt(agg.success_rate);
      if (agg.capped) std::cerr << " capped " << agg.capped;
      if (agg.empty_candidates) std::cerr << " empty_candidates " << agg.empty_candidates;
      std::cerr << "\n";
      aggs.push_back(std::move(agg));
    }
  }
  emit(c.out, c.format == "json" ? io::aggregates_json(aggs) : io::trials_csv(aggs));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CatalogCmd {
  std::string case_id;
  std::optional<int> j;
};

int cmd_catalog(const CatalogCmd& c) {
  if (c.case_id.empty()) {
    std::cout << "case,j,n_arms,sigma_bar_sq,feasible,h_va\n";
    for (const CatalogEntry& e : full_catalog())
      std::cout << e.case_id << ',' << e.j << ',' << e.instance.size() << ',' << fmt(e.instance.sigma_bar_sq())
                << ',' << (e.ground_truth.feasible ? 1 : 0) << ',' << fmt(h_va(e.ground_truth)) << '\n';
    return kExitOk;
  }
  if (!c.j) throw Error(ErrorKind::invalid_argument, "catalog --case needs --j");
  const CatalogEntry e = catalog_instance(c.case_id, *c.j);
  const GroundTruth& gt = e.ground_truth;
  std::cout << "case " << e.case_id << " j=" << e.j << " sigma_bar_sq " << fmt(e.instance.sigma_bar_sq())
            << " feasible " << (gt.feasible ? "yes" : "no") << "\n";
  if (gt.i_star) std::cout << "i_star " << *gt.i_star << "\n";
  std::cout << "arm,mean,variance,alpha,beta,mean_gap,var_gap\n";
  for (ArmIndex i = 0; i < e.instance.size(); ++i) {
    const auto& b = std::get<Beta>(e.instance.arm(i).law());
    std::cout << i << ',' << fmt(e.arm_moments[i].mean) << ',' << fmt(e.arm_moments[i].variance) << ','
              << fmt(b.alpha) << ',' << fmt(b.beta) << ',' << fmt(gt.mean_gaps[i]) << ',' << fmt(gt.var_gaps[i])
              << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyCmd {
  std::optional<std::uint64_t> seed;
  std::uint64_t coverage_trials = 60;
  std::string inject = "none";
};

int cmd_verify(const VerifyCmd& c) {
  if (!c.seed) throw Error(ErrorKind::invalid_argument, "--seed is required");
  reference::Options ref_opt;
  double radius_scale = 1.0;
  if (c.inject == "oracle") ref_opt.halve_mean_gaps = false;
  if (c.inject == "radius") radius_scale = 0.2;

  std::vector<PropertyOutcome> results;
  results.push_back(check_catalog_validity());
  results.push_back(check_hardness_oracle(ref_opt));
  results.push_back(check_coverage(c.coverage_trials, *c.seed, radius_scale));
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    all = all && r.passed;
  }
  return all ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance-constrained best arm identification: VA-LUCB, baselines, hardness analytics"};
  app.require_subcommand(1);

  HardnessCmd hc;
  auto* hardness = app.add_subcommand("hardness", "hardness terms, lower bound, and scale of an instance");
  hc.src.add_options(hardness);
  hardness->add_option("--delta", hc.delta, "confidence parameter");
  hardness->add_option("--format", hc.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  hardness->add_option("--out", hc.out, "output path (default stdout)");

  RunCmd rc;
  auto* run = app.add_subcommand("run", "seeded multi-trial runs; per-trial CSV or aggregate JSON");
  rc.src.add_options(run);
  run->add_option("--algo", rc.algos, "valucb, valucb_subg, riskaverse, va_uniform (comma list)")->delimiter(',');
  run->add_option("--trials", rc.trials, "trials per (algorithm, instance)");
  run->add_option("--delta", rc.delta, "confidence parameter");
  run->add_option("--seed", rc.seed, "master seed (required)");
  run->add_option("--parallel", rc.parallel, "concurrent trials; output is identical at any value");
  run->add_option("--max-time-steps", rc.max_time_steps, "per-trial cap; capped trials count as failures");
  run->add_option("--format", rc.format, "csv (per trial) or json (aggregates)")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--out", rc.out, "output path (default stdout)");
  run->add_option("--riskaverse-stop", rc.riskaverse_stop,
                  "RiskAverse variance stop test: sample_variance (as published) or upper_bound")
      ->check(CLI::IsMember({"sample_variance", "upper_bound"}));

  CatalogCmd cc;
  auto* catalog = app.add_subcommand("catalog", "list catalog entries, or describe one with --case/--j");
  catalog->add_option("--case", cc.case_id, "case id");
  catalog->add_option("--j", cc.j, "instance index");

  VerifyCmd vc;
  auto* verify = app.add_subcommand("verify", "fast property suite");
  verify->add_option("--seed", vc.seed, "master seed (required)");
  verify->add_option("--coverage-trials", vc.coverage_trials, "trials for the coverage property");
  verify->add_option("--inject", vc.inject, "negative-control fixture: none, radius, oracle")
      ->check(CLI::IsMember({"none", "radius", "oracle"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*hardness) return cmd_hardness(hc);
    if (*run) return cmd_run(rc);
    if (*catalog) return cmd_catalog(cc);
    if (*verify) return cmd_verify(vc);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::io_error ? kExitFailed : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}
