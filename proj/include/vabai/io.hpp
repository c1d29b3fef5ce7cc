#pragma once

// Instance documents, CSV/JSON serialization, atomic file output.
//
// Instance document:
//   {
//     "arms": [ {"kind": "bernoulli", "params": {"p": 0.9}},
//               {"kind": "beta", "params": {"alpha": 2, "beta": 3}},
//               {"kind": "beta", "mean": 0.5, "variance": 0.05},
//               {"kind": "gaussian", "params": {"mu": 0.1, "sigma": 0.1}} ],
//     "sigma_bar_sq": 0.2,
//     "subg_proxy": 0.5,      optional
//     "eps_v": 0.0            optional
//   }

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vabai/core.hpp"
#include "vabai/distributions.hpp"
#include "vabai/experiments.hpp"
#include "vabai/hardness.hpp"
#include "vabai/instance.hpp"

namespace vabai::io {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCsvHeader = "algorithm,case,j,trial,seed,tau,time_steps,success";

using nlohmann::json;

namespace detail {

inline double number_at(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_number())
    throw Error(ErrorKind::invalid_argument, where + ": missing numeric field '" + key + "'");
  return obj.at(key).get<double>();
}

inline DistributionSpec parse_arm(const json& a, std::size_t index) {
  const std::string where = "arm " + std::to_string(index);
  if (!a.is_object() || !a.contains("kind") || !a.at("kind").is_string())
    throw Error(ErrorKind::invalid_argument, where + ": expected an object with a string 'kind'");
  const std::string kind = a.at("kind").get<std::string>();
  const bool by_moments = a.contains("mean") || a.contains("variance");
  if (by_moments && a.contains("params"))
    throw Error(ErrorKind::invalid_argument, where + ": give either 'params' or 'mean'/'variance', not both");

  if (kind == "bernoulli") {
    if (by_moments) return DistributionSpec::bernoulli(number_at(a, "mean", where));
    return DistributionSpec::bernoulli(number_at(a.value("params", json::object()), "p", where));
  }
  if (kind == "beta") {
    if (by_moments) return beta_from_moments(number_at(a, "mean", where), number_at(a, "variance", where));
    const json p = a.value("params", json::object());
    return DistributionSpec::beta(number_at(p, "alpha", where), number_at(p, "beta", where));
  }
  if (kind == "gaussian") {
    if (by_moments) {
      const double v = number_at(a, "variance", where);
      if (!(v > 0.0)) throw Error(ErrorKind::invalid_argument, where + ": variance must be positive");
      return DistributionSpec::gaussian(number_at(a, "mean", where), std::sqrt(v));
    }
    const json p = a.value("params", json::object());
    return DistributionSpec::gaussian(number_at(p, "mu", where), number_at(p, "sigma", where));
  }
  throw Error(ErrorKind::invalid_argument, where + ": unknown kind '" + kind + "'");
}

}  // namespace detail

inline BanditInstance parse_instance(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::invalid_argument, "instance document must be an object");
  if (!doc.contains("arms") || !doc.at("arms").is_array())
    throw Error(ErrorKind::invalid_argument, "instance document needs an 'arms' array");
  std::vector<DistributionSpec> arms;
  std::size_t k = 0;
  for (const json& a : doc.at("arms")) arms.push_back(detail::parse_arm(a, k++));
  const double threshold = detail::number_at(doc, "sigma_bar_sq", "instance");
  std::optional<double> proxy;
  if (doc.contains("subg_proxy") && !doc.at("subg_proxy").is_null())
    proxy = detail::number_at(doc, "subg_proxy", "instance");
  const double eps_v = doc.contains("eps_v") ? detail::number_at(doc, "eps_v", "instance") : 0.0;
  return BanditInstance(std::move(arms), threshold, proxy, eps_v);
}

inline BanditInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open instance file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_argument, "instance file '" + path + "': " + e.what());
  }
  return parse_instance(doc);
}

/// Writes via a sibling temporary file and a rename, so readers never see a
/// partial file.
inline void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io_error, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::io_error, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw Error(ErrorKind::io_error, "cannot rename onto '" + path + "': " + ec.message());
}

inline void append_csv_rows(std::ostream& os, const AggregateResult& agg) {
  for (const TrialRecord& r : agg.trials) {
    os << to_string(agg.algorithm) << ',' << agg.case_id << ',' << agg.j << ',' << r.trial << ',' << r.seed
       << ',' << r.tau << ',' << r.time_steps << ',' << (r.success ? 1 : 0) << '\n';
  }
}

inline std::string trials_csv(const std::vector<AggregateResult>& aggs) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& a : aggs) append_csv_rows(os, a);
  return os.str();
}

/// Non-finite values serialize as strings ("inf", "-inf", "nan"); JSON has no
/// literal for them.
inline json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline json to_json(const HardnessReport& r) {
  json j;
  j["h_va"] = number(r.h_va);
  j["terms"] = json::array({number(r.terms[0]), number(r.terms[1]), number(r.terms[2]), number(r.terms[3])});
  j["h1"] = r.h1 ? number(*r.h1) : json(nullptr);
  j["lower_bound_constant"] = r.lower ? number(r.lower->c) : json(nullptr);
  j["lower_bound_value"] = r.lower ? number(r.lower->bound) : json(nullptr);
  j["scale"] = r.scale ? number(*r.scale) : json(nullptr);
  return j;
}

inline json to_json(const AggregateResult& a) {
  json j;
  j["algorithm"] = to_string(a.algorithm);
  j["case"] = a.case_id;
  j["j"] = a.j;
  j["n_trials"] = a.n_trials;
  j["mean_tau"] = number(a.mean_tau);
  j["std_tau"] = number(a.std_tau);
  j["success_rate"] = number(a.success_rate);
  j["mean_time_steps"] = number(a.mean_time_steps);
  j["capped_trials"] = a.capped;
  j["empty_candidate_trials"] = a.empty_candidates;
  j["hardness"] = to_json(a.hardness);
  return j;
}

inline std::string aggregates_json(const std::vector<AggregateResult>& aggs) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["aggregates"] = json::array();
  for (const auto& a : aggs) doc["aggregates"].push_back(to_json(a));
  return doc.dump(2) + "\n";
}

inline std::string hardness_json(const HardnessReport& r, const std::string& source, double delta) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["instance"] = source;
  doc["delta"] = delta;
  doc["hardness"] = to_json(r);
  return doc.dump(2) + "\n";
}

}  // namespace vabai::io
