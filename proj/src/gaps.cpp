#include "pascomb/gaps.hpp"

#include <cmath>
#include <stdexcept>

namespace pascomb {

namespace {

inline void take_min(std::optional<double>& slot, double v) {
  if (!slot || v < *slot) slot = v;
}

inline void take_max(std::optional<double>& slot, double v) {
  if (!slot || v > *slot) slot = v;
}

}  // namespace

GapTable compute_gaps(const Instance& instance, const std::vector<Mask>& family,
                      const SafetyPartition& partition, long long T, double delta_T) {
  if (T < 2) throw std::invalid_argument("compute_gaps: T must be >= 2");
  if (!(delta_T > 0.0 && delta_T < 1.0)) {
    throw std::invalid_argument("compute_gaps: delta_T must lie in (0,1)");
  }
  const std::size_t L = static_cast<std::size_t>(instance.num_items());
  GapTable g;
  g.delta.resize(family.size());
  g.delta_v.resize(family.size());
  g.delta_safe_sub_min.resize(L);
  g.delta_unsafe_sub_min.resize(L);
  g.c_i.resize(L);
  g.delta_v_risky.resize(L);
  g.psi.resize(L);
  g.psi_prime.resize(L);
  g.phi.resize(L);

  const double log_t = std::log(static_cast<double>(T));
  const double log_t_over_delta = std::log(static_cast<double>(T) / delta_T);
  const double log_inv_delta = std::log(1.0 / delta_T);

  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    const auto [mu, var] = solution_moments(instance, family[idx]);
    g.delta[idx] = partition.mu_star - mu;
    g.delta_v[idx] = std::abs(var - instance.sigma_bar_sq);
  }
  g.delta_v_star = g.delta_v[static_cast<std::size_t>(partition.s_star_index)];

  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    const auto cls = partition.solution_class[idx];
    const double d = g.delta[idx];
    const double dv = g.delta_v[idx];
    for (int i : items_of(family[idx])) {
      const auto ui = static_cast<std::size_t>(i);
      switch (cls) {
        case SafetyPartition::Class::SafeSuboptimal: {
          take_min(g.delta_safe_sub_min[ui], d);
          const double by_mean = log_t / (d * d);
          take_max(g.psi[ui], std::min(by_mean, 9.0 * log_t_over_delta / (dv * dv)));
          take_max(g.psi_prime[ui], std::min(by_mean, 9.0 * log_inv_delta / (dv * dv)));
          break;
        }
        case SafetyPartition::Class::UnsafeSuboptimal: {
          take_min(g.delta_unsafe_sub_min[ui], d);
          const double ratio = d / std::max(d, dv / 3.0);
          take_max(g.c_i[ui], ratio * ratio);
          take_max(g.phi[ui], std::min(log_t / (d * d), 9.0 * log_t / (dv * dv)));
          break;
        }
        case SafetyPartition::Class::Risky:
          take_min(g.delta_v_risky[ui], dv);
          break;
        case SafetyPartition::Class::Star:
          break;  // S* is excluded from every suboptimal minimum
      }
    }
  }
  return g;
}

}  // namespace pascomb
