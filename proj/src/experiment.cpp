#include "pascomb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

namespace pascomb {

std::string to_string(Algorithm a) {
  return a == Algorithm::PASComb ? "pascomb" : "combucb1";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "pascomb") return Algorithm::PASComb;
  if (s == "combucb1") return Algorithm::CombUCB1;
  throw std::invalid_argument("unknown algorithm: " + s);
}

Trace simulate_run(const RunConfig& config, int run_index) {
  EngineConfig ec;
  ec.epsilon = config.epsilon;
  ec.omegas = config.omega_override;
  ec.track_realized = config.track_realized;
  Rng env = Rng::stream(config.master_seed, static_cast<std::uint64_t>(run_index), 0);
  Rng ref = Rng::stream(config.master_seed, static_cast<std::uint64_t>(run_index), 1);
  if (config.algorithm == Algorithm::PASComb) {
    return pascomb_run(*config.world, config.T, config.delta, ec, env, ref);
  }
  return combucb1_run(*config.world, config.T, ec, env, ref);
}

std::vector<std::int64_t> checkpoint_grid(std::int64_t T, int points) {
  std::set<std::int64_t> grid;
  grid.insert(1);
  grid.insert(T);
  for (int k = 1; k < points; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(points - 1);
    const auto t = static_cast<std::int64_t>(
        std::llround(std::exp(f * std::log(static_cast<double>(T)))));
    grid.insert(std::clamp<std::int64_t>(t, 1, T));
  }
  // Quartiles pinned exactly: the plateau and violation checks read them.
  for (std::int64_t t : {T / 4, T / 2, 3 * T / 4}) {
    if (t >= 1) grid.insert(t);
  }
  return {grid.begin(), grid.end()};
}

namespace {

struct RunSummary {
  std::vector<double> pseudo;      // cumulative pseudo-regret at checkpoints
  std::vector<double> realized;
  std::vector<double> reward;      // cumulative reward at checkpoints
  std::vector<double> unsafe_cum;  // unsafe-step count at checkpoints
  bool any_violation = false;
};

RunSummary summarize(const Trace& trace, const std::vector<std::int64_t>& checkpoints) {
  RunSummary s;
  s.pseudo.reserve(checkpoints.size());
  s.realized.reserve(checkpoints.size());
  s.reward.reserve(checkpoints.size());
  s.unsafe_cum.reserve(checkpoints.size());
  double reward_cum = 0.0;
  double unsafe_cum = 0.0;
  std::size_t next = 0;
  for (const auto& step : trace.steps) {
    reward_cum += step.reward;
    if (step.unsafe) {
      unsafe_cum += 1.0;
      s.any_violation = true;
    }
    while (next < checkpoints.size() && checkpoints[next] == step.t) {
      s.pseudo.push_back(step.pseudo_regret_cum);
      s.realized.push_back(step.realized_regret_cum);
      s.reward.push_back(reward_cum);
      s.unsafe_cum.push_back(unsafe_cum);
      ++next;
    }
  }
  if (next != checkpoints.size()) {
    throw std::logic_error("summarize: trace shorter than its checkpoint grid");
  }
  return s;
}

}  // namespace

Aggregate monte_carlo(const RunConfig& config, int parallel) {
  if (config.replications < 1) {
    throw std::invalid_argument("monte_carlo: replications must be >= 1");
  }
  const int n = config.replications;
  const auto checkpoints = checkpoint_grid(config.T);
  std::vector<RunSummary> summaries(static_cast<std::size_t>(n));

  const int workers = std::max(1, std::min(parallel, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) {
      summaries[static_cast<std::size_t>(i)] = summarize(simulate_run(config, i), checkpoints);
    }
  } else {
    std::atomic<int> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const int i = cursor.fetch_add(1);
          if (i >= n) break;
          summaries[static_cast<std::size_t>(i)] =
              summarize(simulate_run(config, i), checkpoints);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Reduction in run-index order: parallel and serial aggregates agree.
  Aggregate agg;
  agg.checkpoints = checkpoints;
  agg.runs = n;
  agg.horizon = config.T;
  const std::size_t m = checkpoints.size();
  agg.mean_regret.assign(m, 0.0);
  agg.se_regret.assign(m, 0.0);
  agg.mean_realized.assign(m, 0.0);
  agg.mean_reward.assign(m, 0.0);
  agg.se_reward.assign(m, 0.0);
  agg.violation_fraction.assign(m, 0.0);
  agg.mean_unsafe_cum.assign(m, 0.0);

  int violating_runs = 0;
  for (const auto& s : summaries) {
    if (s.any_violation) ++violating_runs;
    for (std::size_t j = 0; j < m; ++j) {
      agg.mean_regret[j] += s.pseudo[j];
      agg.mean_realized[j] += s.realized[j];
      agg.mean_reward[j] += s.reward[j];
      agg.mean_unsafe_cum[j] += s.unsafe_cum[j];
      agg.violation_fraction[j] += s.unsafe_cum[j] / static_cast<double>(checkpoints[j]);
    }
  }
  const double nd = static_cast<double>(n);
  for (std::size_t j = 0; j < m; ++j) {
    agg.mean_regret[j] /= nd;
    agg.mean_realized[j] /= nd;
    agg.mean_reward[j] /= nd;
    agg.mean_unsafe_cum[j] /= nd;
    agg.violation_fraction[j] /= nd;
  }
  if (n > 1) {
    for (std::size_t j = 0; j < m; ++j) {
      double ss_regret = 0.0;
      double ss_reward = 0.0;
      for (const auto& s : summaries) {
        const double dr = s.pseudo[j] - agg.mean_regret[j];
        const double dw = s.reward[j] - agg.mean_reward[j];
        ss_regret += dr * dr;
        ss_reward += dw * dw;
      }
      agg.se_regret[j] = std::sqrt(ss_regret / (nd - 1.0) / nd);
      agg.se_reward[j] = std::sqrt(ss_reward / (nd - 1.0) / nd);
    }
  }
  const double p = static_cast<double>(violating_runs) / nd;
  agg.any_violation_rate = p;
  agg.any_violation_se = std::sqrt(p * (1.0 - p) / nd);
  return agg;
}

Instance table1_instance(int set, double sigma_bar_sq) {
  if (set != 1 && set != 2) throw std::invalid_argument("table1_instance: set must be 1 or 2");
  const std::vector<double> means = {0.5, 0.45, 0.4, 0.35, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3};
  std::vector<double> variances;
  if (set == 1) {
    variances = {0.24, 0.24, 0.04, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01};
  } else {
    variances.assign(10, 0.01);
  }
  std::vector<std::string> warnings;
  return Instance::make(means, variances, RewardModel::Beta, 3,
                        SolutionFamily::all_subsets(), sigma_bar_sq, 0.25, &warnings);
}

std::vector<RunConfig> experiment_preset(int id, std::uint64_t master_seed,
                                         std::optional<std::int64_t> T_override,
                                         std::optional<int> reps_override) {
  if (id < 1 || id > 3) throw std::invalid_argument("experiment_preset: id must be 1, 2 or 3");
  const int reps = reps_override.value_or(50);

  std::vector<RunConfig> configs;
  auto add = [&](Instance inst, Algorithm algo, std::int64_t T, const std::string& label) {
    RunConfig c;
    c.world = std::make_shared<World>(World::make(std::move(inst)));
    c.algorithm = algo;
    c.T = T_override.value_or(T);
    c.delta = 0.05;
    c.replications = reps;
    c.master_seed = splitmix64(master_seed ^ splitmix64(configs.size() + 0xA11CE));
    c.label = label;
    configs.push_back(std::move(c));
  };

  switch (id) {
    case 1: {
      const std::int64_t T = 200000;
      add(table1_instance(1, 0.6), Algorithm::PASComb, T, "pascomb_b0.6");
      add(table1_instance(1, 0.751), Algorithm::PASComb, T, "pascomb_b0.751");
      add(table1_instance(1, 0.751), Algorithm::CombUCB1, T, "combucb1");
      break;
    }
    case 2: {
      const std::int64_t T = 100000;
      add(table1_instance(1, 0.4), Algorithm::PASComb, T, "pascomb");
      add(table1_instance(1, 0.4), Algorithm::CombUCB1, T, "combucb1");
      break;
    }
    case 3: {
      const std::int64_t T = 200000;
      double budget = 0.14;
      for (int k = 0; k <= 9; ++k) {
        add(table1_instance(2, budget), Algorithm::PASComb, T, "pascomb_k" + std::to_string(k));
        budget *= 1.2;
      }
      add(table1_instance(2, 0.14 * std::pow(1.2, 9)), Algorithm::CombUCB1, T, "combucb1");
      break;
    }
  }
  return configs;
}

AdditionalRegret additional_regret(const Aggregate& algo, const Aggregate& baseline) {
  if (algo.checkpoints != baseline.checkpoints) {
    throw std::invalid_argument("additional_regret: checkpoint grids do not match");
  }
  AdditionalRegret out;
  out.checkpoints = algo.checkpoints;
  out.diff.resize(algo.checkpoints.size());
  out.se.resize(algo.checkpoints.size());
  for (std::size_t j = 0; j < algo.checkpoints.size(); ++j) {
    out.diff[j] = algo.mean_regret[j] - baseline.mean_regret[j];
    out.se[j] = std::sqrt(algo.se_regret[j] * algo.se_regret[j] +
                          baseline.se_regret[j] * baseline.se_regret[j]);
  }
  return out;
}

SafetyStats safety_stats(const Trace& trace) {
  SafetyStats s;
  std::int64_t count = 0;
  for (const auto& step : trace.steps) {
    if (step.unsafe) ++count;
  }
  s.per_step_violation_fraction =
      trace.steps.empty() ? 0.0
                          : static_cast<double>(count) / static_cast<double>(trace.steps.size());
  s.any_violation = count > 0;
  return s;
}

LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("ols_fit: need at least two matched points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace pascomb
