#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pascomb/engine.hpp"

namespace pascomb {

enum class Algorithm { PASComb, CombUCB1 };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct RunConfig {
  std::shared_ptr<const World> world;
  Algorithm algorithm = Algorithm::PASComb;
  std::int64_t T = 100000;
  double delta = 0.05;
  double epsilon = 0.01;
  std::optional<Omegas> omega_override;
  std::uint64_t master_seed = 0;
  int replications = 1;
  bool track_realized = true;
  std::string label;  // used in emitted file names
};

/// One seeded replication; deterministic in (master_seed, run_index).
Trace simulate_run(const RunConfig& config, int run_index);

/// Mean/standard-error curves at checkpoint times plus the safety ledger.
/// Checkpoints are ~100 log-spaced times merged with the quartiles
/// {T/4, T/2, 3T/4, T}.
struct Aggregate {
  std::vector<std::int64_t> checkpoints;
  std::vector<double> mean_regret;    // cumulative pseudo-regret
  std::vector<double> se_regret;
  std::vector<double> mean_realized;  // cumulative realized regret
  std::vector<double> mean_reward;    // cumulative reward
  std::vector<double> se_reward;
  std::vector<double> violation_fraction;   // mean (unsafe steps <= t) / t
  std::vector<double> mean_unsafe_cum;      // mean count of unsafe steps <= t
  double any_violation_rate = 0.0;          // fraction of runs with >= 1 unsafe pull
  double any_violation_se = 0.0;            // binomial standard error
  int runs = 0;
  std::int64_t horizon = 0;
};

std::vector<std::int64_t> checkpoint_grid(std::int64_t T, int points = 100);

/// Runs `config.replications` seeded replications (worker pool of size
/// `parallel`) and reduces them in run-index order, so parallel and serial
/// execution aggregate identically.
Aggregate monte_carlo(const RunConfig& config, int parallel = 1);

/// The three preset studies on the Table-1 item sets (L=10, K=3, Beta
/// rewards, sigma_sq=0.25, delta=0.05):
///   1: Set 1, PASCombUCB at budgets 0.6 and 0.751 plus CombUCB1   (default T=2e5)
///   2: Set 1 at budget 0.4, PASCombUCB vs CombUCB1                (default T=1e5)
///   3: Set 2 over budgets 0.14*1.2^k, k=0..9, plus CombUCB1       (default T=2e5)
std::vector<RunConfig> experiment_preset(int id, std::uint64_t master_seed,
                                         std::optional<std::int64_t> T_override = std::nullopt,
                                         std::optional<int> reps_override = std::nullopt);

/// Table-1 instance (set = 1 or 2) at the given variance budget.
Instance table1_instance(int set, double sigma_bar_sq);

/// Pointwise difference of mean cumulative regrets with propagated standard
/// errors. Throws std::invalid_argument on mismatched checkpoints.
struct AdditionalRegret {
  std::vector<std::int64_t> checkpoints;
  std::vector<double> diff;
  std::vector<double> se;
};
AdditionalRegret additional_regret(const Aggregate& algo, const Aggregate& baseline);

struct SafetyStats {
  double per_step_violation_fraction = 0.0;
  bool any_violation = false;
};
SafetyStats safety_stats(const Trace& trace);

/// Ordinary least squares y = intercept + slope * x with coefficient of
/// determination; used for the hardness-scaling fit.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pascomb
