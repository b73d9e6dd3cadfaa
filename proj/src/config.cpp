#include "pascomb/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pascomb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ConfigError(origin + ": " + what);
}

std::vector<double> require_number_array(const json& j, const char* key,
                                         const std::string& origin) {
  if (!j.contains(key)) fail(origin, std::string("missing key '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_array() || v.empty()) {
    fail(origin, std::string("key '") + key + "' must be a nonempty array");
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(origin, std::string("key '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

LoadedConfig parse_config_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be an object");

  const auto means = require_number_array(j, "means", origin);
  const auto variances = require_number_array(j, "variances", origin);
  if (!j.contains("reward_model")) fail(origin, "missing key 'reward_model'");
  if (!j.contains("K")) fail(origin, "missing key 'K'");
  if (!j.contains("family")) fail(origin, "missing key 'family'");
  if (!j.contains("sigma_bar_sq")) fail(origin, "missing key 'sigma_bar_sq'");

  RewardModel model;
  try {
    model = reward_model_from_string(j.at("reward_model").get<std::string>());
  } catch (const std::exception& e) {
    fail(origin, std::string("key 'reward_model': ") + e.what());
  }
  const int k = j.at("K").get<int>();
  const double sigma_bar_sq = j.at("sigma_bar_sq").get<double>();
  const double sigma_sq = j.value("sigma_sq", 0.25);

  const std::string family_kind = j.at("family").get<std::string>();
  SolutionFamily family;
  if (family_kind == "subsets") {
    family = SolutionFamily::all_subsets();
  } else if (family_kind == "kpath") {
    if (!j.contains("path_sizes")) {
      fail(origin, "family 'kpath' requires key 'path_sizes'");
    }
    std::vector<int> sizes;
    for (const auto& x : j.at("path_sizes")) sizes.push_back(x.get<int>());
    family = SolutionFamily::kpath(std::move(sizes));
  } else if (family_kind == "explicit") {
    if (!j.contains("solutions")) {
      fail(origin, "family 'explicit' requires key 'solutions'");
    }
    std::vector<Mask> sols;
    for (const auto& arr : j.at("solutions")) {
      Mask m = 0;
      for (const auto& x : arr) {
        const int item = x.get<int>();  // 1-based in config files
        if (item < 1 || item > kMaxItems + 1) fail(origin, "item index out of range");
        m |= Mask{1} << (item - 1);
      }
      sols.push_back(m);
    }
    family = SolutionFamily::explicit_family(std::move(sols));
  } else {
    fail(origin, "key 'family' must be one of subsets|kpath|explicit");
  }

  LoadedConfig out;
  try {
    out.instance = Instance::make(means, variances, model, k, std::move(family), sigma_bar_sq,
                                  sigma_sq, &out.warnings);
  } catch (const std::invalid_argument& e) {
    fail(origin, e.what());
  }

  if (j.contains("algorithm")) {
    try {
      out.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    } catch (const std::exception& e) {
      fail(origin, std::string("key 'algorithm': ") + e.what());
    }
  }
  if (j.contains("T")) out.T = j.at("T").get<std::int64_t>();
  if (j.contains("delta")) out.delta = j.at("delta").get<double>();
  if (j.contains("epsilon")) out.epsilon = j.at("epsilon").get<double>();
  if (j.contains("reps")) out.reps = j.at("reps").get<int>();
  return out;
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str(), path);
}

}  // namespace pascomb
