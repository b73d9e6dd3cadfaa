#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pascomb/classify.hpp"
#include "pascomb/confidence.hpp"
#include "pascomb/gaps.hpp"
#include "pascomb/instance.hpp"
#include "pascomb/rng.hpp"

namespace pascomb {

/// Per-item reward sampler parameters (Beta shape parameters are resolved
/// from the moments once, at World construction).
struct ItemSampler {
  RewardModel model = RewardModel::PointMass;
  double mean = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Immutable per-instance tables shared by all runs: the enumerated family in
/// canonical order, true solution moments, the classification, and the
/// absolutely-safe thresholds q and Q.
struct World {
  Instance instance;
  std::vector<Mask> family;
  std::vector<double> mu_s;
  std::vector<double> var_s;
  std::vector<char> unsafe;  // var_s >= budget, against TRUE variances
  SafetyPartition partition;
  std::vector<ItemSampler> samplers;
  int q = 1;  // effective floor(budget/sigma_sq), clamped at >= 1
  int big_q = 1;

  static World make(Instance instance);

  double true_mean(Mask s) const;
  double true_variance(Mask s) const;
};

/// One reward draw for an item (environment feedback is per pulled item).
double draw_reward(const ItemSampler& sampler, Rng& rng);

/// q = floor(sigma_bar_sq / sigma_sq): solutions with at most q items are
/// safe with probability 1. Returns max(q, 1): when the budget does not even
/// cover one item (possible on the Experiment-3 grid) the singleton stays the
/// atomic pull unit. Q = ceil(K / q).
struct SafeThreshold {
  int q;
  int big_q;
};
SafeThreshold absolutely_safe_threshold(double sigma_bar_sq, double sigma_sq, int K);

/// Initialization oracle: member of the family with at most q items
/// maximizing the count of items pulled fewer than twice. Canonical
/// tie-break. Returns the family index.
int init_select(std::span<const Mask> family, std::span<const ItemStats> stats, int q);

/// Selection oracle: argmax of U^mu over the possibly safe set
/// {S : L^v_S < budget}, canonical tie-break, exhaustive scan. Throws
/// std::logic_error if the possibly safe set is empty (unreachable for valid
/// instances: every singleton has L^v <= sigma_sq < budget).
int oracle_select(std::span<const Mask> family, std::span<const ItemBounds> bounds,
                  double sigma_bar_sq);

struct SplitResult {
  std::vector<Mask> parts;  // disjoint, union = input, canonical item order
  int n_p() const { return static_cast<int>(parts.size()); }
};

/// Greedy split of `a` into sub-solutions whose summed variance UCBs stay
/// within the budget. Items are taken in ascending index order; a new
/// sub-solution opens when the running UCB sum would exceed the budget. An
/// item always enters an empty sub-solution (a singleton cannot be split
/// further), which matters only when a single item's UCB exceeds the budget.
SplitResult greedy_split(Mask a, std::span<const ItemBounds> bounds, double sigma_bar_sq);

struct StepRecord {
  std::int64_t t = 0;       // 1-based time step
  std::int64_t phase = 0;   // 1-based phase index
  Mask pulled = 0;          // the sub-solution consuming this step
  double reward = 0.0;      // realized reward sum of the pulled items
  double pseudo_regret_cum = 0.0;
  double realized_regret_cum = 0.0;
  bool unsafe = false;      // var of pulled vs TRUE variances
};

struct PhaseRecord {
  std::int64_t phase = 0;
  Mask a_p = 0;
  int n_p = 0;
  std::uint32_t u_flags = 0;  // bit r-1 set iff U^v_{A_p} > r*budget, r in [Q-1]
  bool init = false;
  bool clamped = false;       // n_p truncated by the T - t budget clamp
};

struct Trace {
  std::vector<StepRecord> steps;
  std::vector<PhaseRecord> phases;
  std::int64_t horizon = 0;
  double mu_star = 0.0;
};

struct EngineConfig {
  double epsilon = 0.01;
  std::optional<Omegas> omegas;  // defaulted from default_omegas(T, delta)
  bool track_realized = true;    // drive the S*-reference reward stream
};

/// PASCombUCB: phased UCB with greedy initialization over absolutely safe
/// solutions, selection over the possibly safe set, and Greedy-Split of the
/// selected solution into empirically safe sub-solutions. Consumes exactly T
/// time steps; deterministic given (world, T, delta, config, rng seeds).
Trace pascomb_run(const World& world, std::int64_t T, double delta,
                  const EngineConfig& config, Rng env_rng, Rng ref_rng);

/// CombUCB1 baseline: one solution per time step, argmax of summed mean UCBs
/// over the whole family, same LIL mean radius, no safety logic. Per-step
/// violation indicator recorded against true variances.
Trace combucb1_run(const World& world, std::int64_t T, const EngineConfig& config,
                   Rng env_rng, Rng ref_rng);

}  // namespace pascomb
