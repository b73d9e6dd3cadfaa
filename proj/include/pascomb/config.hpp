#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pascomb/experiment.hpp"
#include "pascomb/instance.hpp"

namespace pascomb {

/// Thrown on a malformed config file; the message carries file and key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/*
Instance/run config: one JSON document for both.

Instance keys (contract):
  means           array of item means
  variances       array of item variances
  reward_model    "beta" | "bernoulli" ("pointmass" accepted for testing)
  K               max solution cardinality
  family          "subsets" | "kpath" | "explicit"
  sigma_bar_sq    variance budget
  sigma_sq        sub-Gaussian proxy (optional, default 0.25)
  path_sizes      required when family = "kpath"
  solutions       array of 1-based item-index arrays, required when family = "explicit"

Optional run keys (flags win over file values):
  algorithm ("pascomb" | "combucb1"), T, delta, epsilon, reps
*/
struct LoadedConfig {
  Instance instance;
  std::vector<std::string> warnings;
  std::optional<Algorithm> algorithm;
  std::optional<std::int64_t> T;
  std::optional<double> delta;
  std::optional<double> epsilon;
  std::optional<int> reps;
};

LoadedConfig load_config_file(const std::string& path);
LoadedConfig parse_config_json(const std::string& text, const std::string& origin);

}  // namespace pascomb
