#include "pascomb/engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pascomb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LilConfig make_lil_config(const EngineConfig& config, std::int64_t T, double delta) {
  const Omegas om = config.omegas ? *config.omegas : default_omegas(T, delta);
  return LilConfig{config.epsilon, om.omega_mu, om.omega_v, om.omega_v_prime};
}

}  // namespace

World World::make(Instance instance) {
  World w;
  w.family = enumerate_solutions(instance.family, instance.num_items(), instance.K);
  w.mu_s.resize(w.family.size());
  w.var_s.resize(w.family.size());
  w.unsafe.resize(w.family.size());
  for (std::size_t idx = 0; idx < w.family.size(); ++idx) {
    const auto [mu, var] = solution_moments(instance, w.family[idx]);
    w.mu_s[idx] = mu;
    w.var_s[idx] = var;
    w.unsafe[idx] = var >= instance.sigma_bar_sq ? 1 : 0;
  }
  w.partition = classify(instance, w.family);
  const auto thr =
      absolutely_safe_threshold(instance.sigma_bar_sq, instance.sigma_sq, instance.K);
  w.q = thr.q;
  w.big_q = thr.big_q;

  w.samplers.resize(static_cast<std::size_t>(instance.num_items()));
  for (int i = 0; i < instance.num_items(); ++i) {
    auto& s = w.samplers[static_cast<std::size_t>(i)];
    s.model = instance.reward_models[static_cast<std::size_t>(i)];
    s.mean = instance.item_means[static_cast<std::size_t>(i)];
    if (s.model == RewardModel::Beta) {
      const auto [a, b] = beta_params_from_moments(
          s.mean, instance.item_variances[static_cast<std::size_t>(i)]);
      s.alpha = a;
      s.beta = b;
    }
  }
  w.instance = std::move(instance);
  return w;
}

double World::true_mean(Mask s) const {
  double mu = 0.0;
  for (Mask m = s; m != 0; m &= m - 1) {
    mu += instance.item_means[static_cast<std::size_t>(std::countr_zero(m))];
  }
  return mu;
}

double World::true_variance(Mask s) const {
  double var = 0.0;
  for (Mask m = s; m != 0; m &= m - 1) {
    var += instance.item_variances[static_cast<std::size_t>(std::countr_zero(m))];
  }
  return var;
}

double draw_reward(const ItemSampler& sampler, Rng& rng) {
  switch (sampler.model) {
    case RewardModel::Beta: return rng.beta(sampler.alpha, sampler.beta);
    case RewardModel::Bernoulli: return rng.bernoulli(sampler.mean) ? 1.0 : 0.0;
    case RewardModel::PointMass: return sampler.mean;
  }
  return 0.0;
}

SafeThreshold absolutely_safe_threshold(double sigma_bar_sq, double sigma_sq, int K) {
  int q = static_cast<int>(std::floor(sigma_bar_sq / sigma_sq));
  if (q < 1) q = 1;  // budget below one item: singleton stays the atomic unit
  const int big_q = (K + q - 1) / q;
  return SafeThreshold{q, big_q};
}

int init_select(std::span<const Mask> family, std::span<const ItemStats> stats, int q) {
  int best = -1;
  int best_count = -1;
  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    const Mask s = family[idx];
    if (std::popcount(s) > q) continue;
    int count = 0;
    for (Mask m = s; m != 0; m &= m - 1) {
      if (stats[static_cast<std::size_t>(std::countr_zero(m))].pulls < 2) ++count;
    }
    if (count > best_count) {
      best_count = count;
      best = static_cast<int>(idx);
    }
  }
  return best;
}

int oracle_select(std::span<const Mask> family, std::span<const ItemBounds> bounds,
                  double sigma_bar_sq) {
  int best = -1;
  double best_u = -kInf;
  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    double l_var = 0.0;
    double u_mu = 0.0;
    for (Mask m = family[idx]; m != 0; m &= m - 1) {
      const auto& b = bounds[static_cast<std::size_t>(std::countr_zero(m))];
      l_var += b.l_var;
      u_mu += b.u_mu;
    }
    if (l_var >= sigma_bar_sq) continue;  // not possibly safe
    if (u_mu > best_u) {
      best_u = u_mu;
      best = static_cast<int>(idx);
    }
  }
  if (best < 0) {
    throw std::logic_error("oracle_select: possibly safe set is empty");
  }
  return best;
}

SplitResult greedy_split(Mask a, std::span<const ItemBounds> bounds, double sigma_bar_sq) {
  SplitResult res;
  Mask cur = 0;
  double cur_uv = 0.0;
  for (Mask m = a; m != 0; m &= m - 1) {
    const int i = std::countr_zero(m);
    const double uv = bounds[static_cast<std::size_t>(i)].u_var;
    // An empty sub-solution always accepts: a singleton cannot be split.
    if (cur != 0 && cur_uv + uv > sigma_bar_sq) {
      res.parts.push_back(cur);
      cur = 0;
      cur_uv = 0.0;
    }
    cur |= Mask{1} << i;
    cur_uv += uv;
  }
  if (cur != 0) res.parts.push_back(cur);
  return res;
}

namespace {

/// Per-run mutable state shared by both algorithms: draws rewards, folds them
/// into the per-item statistics, and appends the step record.
struct Runner {
  const World& world;
  bool track_realized;
  Rng env_rng;
  Rng ref_rng;
  Trace trace;
  std::vector<ItemStats> stats;
  std::int64_t t = 0;
  double pseudo_cum = 0.0;
  double realized_cum = 0.0;

  Runner(const World& w, std::int64_t T, bool realized, Rng env, Rng ref)
      : world(w), track_realized(realized), env_rng(env), ref_rng(ref) {
    trace.horizon = T;
    trace.mu_star = w.partition.mu_star;
    trace.steps.reserve(static_cast<std::size_t>(T));
    stats.resize(static_cast<std::size_t>(w.instance.num_items()));
  }

  void pull(Mask sub, std::int64_t phase) {
    double reward = 0.0;
    for (Mask m = sub; m != 0; m &= m - 1) {
      const int i = std::countr_zero(m);
      const double w = draw_reward(world.samplers[static_cast<std::size_t>(i)], env_rng);
      update(stats[static_cast<std::size_t>(i)], w);
      reward += w;
    }
    double ref = 0.0;
    if (track_realized) {
      // Independent stream for the S* reference, so the algorithm's
      // observations are unaffected.
      for (Mask m = world.partition.s_star; m != 0; m &= m - 1) {
        const int i = std::countr_zero(m);
        ref += draw_reward(world.samplers[static_cast<std::size_t>(i)], ref_rng);
      }
    }
    ++t;
    pseudo_cum += world.partition.mu_star - world.true_mean(sub);
    realized_cum += ref - reward;
    StepRecord rec;
    rec.t = t;
    rec.phase = phase;
    rec.pulled = sub;
    rec.reward = reward;
    rec.pseudo_regret_cum = pseudo_cum;
    rec.realized_regret_cum = realized_cum;
    rec.unsafe = world.true_variance(sub) >= world.instance.sigma_bar_sq;
    trace.steps.push_back(rec);
  }

  bool any_underpulled() const {
    for (const auto& s : stats) {
      if (s.pulls < 2) return true;
    }
    return false;
  }
};

}  // namespace

Trace pascomb_run(const World& world, std::int64_t T, double delta,
                  const EngineConfig& config, Rng env_rng, Rng ref_rng) {
  if (T < 1) throw std::invalid_argument("pascomb_run: T must be >= 1");
  const int L = world.instance.num_items();
  const double budget = world.instance.sigma_bar_sq;
  const LilConfig lc = make_lil_config(config, T, delta);

  Runner run(world, T, config.track_realized, env_rng, ref_rng);
  std::int64_t p = 0;

  // Initialization: greedily pull absolutely safe solutions, one time step
  // per phase, until every item has been pulled twice or the budget runs out.
  while (run.t < T && run.any_underpulled()) {
    const int sel = init_select(world.family, run.stats, world.q);
    const Mask a = world.family[static_cast<std::size_t>(sel)];
    ++p;
    run.pull(a, p);
    PhaseRecord ph;
    ph.phase = p;
    ph.a_p = a;
    ph.n_p = 1;
    ph.init = true;
    run.trace.phases.push_back(ph);
  }

  if (run.t < T) {
    std::vector<ItemBounds> bounds(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i) {
      bounds[static_cast<std::size_t>(i)] =
          item_bounds(run.stats[static_cast<std::size_t>(i)], lc, world.instance.sigma_sq);
    }
    while (run.t < T) {
      ++p;
      // Selection and splitting both use the bounds as of the previous phase.
      const int sel = oracle_select(world.family, bounds, budget);
      const Mask a = world.family[static_cast<std::size_t>(sel)];
      SplitResult split = greedy_split(a, bounds, budget);

      double uv_a = 0.0;
      for (Mask m = a; m != 0; m &= m - 1) {
        uv_a += bounds[static_cast<std::size_t>(std::countr_zero(m))].u_var;
      }
      std::uint32_t flags = 0;
      for (int r = 1; r <= world.big_q - 1; ++r) {
        if (uv_a > static_cast<double>(r) * budget) flags |= 1u << (r - 1);
      }

      int n_p = split.n_p();
      bool clamped = false;
      if (n_p > T - run.t) {
        n_p = static_cast<int>(T - run.t);
        clamped = true;
      }
      for (int r = 0; r < n_p; ++r) {
        run.pull(split.parts[static_cast<std::size_t>(r)], p);
      }
      PhaseRecord ph;
      ph.phase = p;
      ph.a_p = a;
      ph.n_p = n_p;
      ph.u_flags = flags;
      ph.clamped = clamped;
      run.trace.phases.push_back(ph);

      for (int r = 0; r < n_p; ++r) {
        for (Mask m = split.parts[static_cast<std::size_t>(r)]; m != 0; m &= m - 1) {
          const int i = std::countr_zero(m);
          bounds[static_cast<std::size_t>(i)] =
              item_bounds(run.stats[static_cast<std::size_t>(i)], lc, world.instance.sigma_sq);
        }
      }
    }
  }
  return std::move(run.trace);
}

Trace combucb1_run(const World& world, std::int64_t T, const EngineConfig& config,
                   Rng env_rng, Rng ref_rng) {
  if (T < 1) throw std::invalid_argument("combucb1_run: T must be >= 1");
  const int L = world.instance.num_items();
  // Only the mean radius enters; there is no confidence parameter delta.
  const LilConfig lc = make_lil_config(config, T, 0.5);

  Runner run(world, T, config.track_realized, env_rng, ref_rng);
  std::vector<double> ucb(static_cast<std::size_t>(L), kInf);  // unpulled: explore first

  while (run.t < T) {
    int best = -1;
    double best_u = -kInf;
    for (std::size_t idx = 0; idx < world.family.size(); ++idx) {
      double u = 0.0;
      for (Mask m = world.family[idx]; m != 0; m &= m - 1) {
        u += ucb[static_cast<std::size_t>(std::countr_zero(m))];
      }
      if (u > best_u) {
        best_u = u;
        best = static_cast<int>(idx);
      }
    }
    const Mask s = world.family[static_cast<std::size_t>(best)];
    const std::int64_t phase = run.t + 1;  // one solution per time step
    run.pull(s, phase);
    PhaseRecord ph;
    ph.phase = phase;
    ph.a_p = s;
    ph.n_p = 1;
    run.trace.phases.push_back(ph);

    for (Mask m = s; m != 0; m &= m - 1) {
      const int i = std::countr_zero(m);
      const auto& st = run.stats[static_cast<std::size_t>(i)];
      ucb[static_cast<std::size_t>(i)] = st.mean() + lil(st.pulls, lc.omega_mu, lc.epsilon);
    }
  }
  return std::move(run.trace);
}

}  // namespace pascomb
