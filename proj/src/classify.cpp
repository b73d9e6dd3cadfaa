#include "pascomb/classify.hpp"

#include <stdexcept>

namespace pascomb {

std::string to_string(SafetyPartition::Class c) {
  switch (c) {
    case SafetyPartition::Class::Star: return "optimal_safe";
    case SafetyPartition::Class::SafeSuboptimal: return "safe_suboptimal";
    case SafetyPartition::Class::Risky: return "risky";
    case SafetyPartition::Class::UnsafeSuboptimal: return "unsafe_suboptimal";
  }
  return "?";
}

SafetyPartition classify(const Instance& instance, const std::vector<Mask>& family) {
  SafetyPartition part;
  int best = -1;
  double best_mu = 0.0;
  bool tie = false;
  std::vector<double> mu(family.size());
  std::vector<double> var(family.size());
  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    const auto [m, v] = solution_moments(instance, family[idx]);
    mu[idx] = m;
    var[idx] = v;
    if (v < instance.sigma_bar_sq) {
      if (best < 0 || m > best_mu) {
        best = static_cast<int>(idx);
        best_mu = m;
        tie = false;
      } else if (m == best_mu) {
        tie = true;  // canonical order keeps the earlier solution
      }
    }
  }
  if (best < 0) throw std::runtime_error("no safe solution");

  part.s_star_index = best;
  part.s_star = family[static_cast<std::size_t>(best)];
  part.mu_star = best_mu;
  part.tie_warning = tie;
  part.solution_class.resize(family.size());
  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    SafetyPartition::Class c;
    if (static_cast<int>(idx) == best) {
      c = SafetyPartition::Class::Star;
    } else if (mu[idx] >= part.mu_star) {
      c = SafetyPartition::Class::Risky;
      part.risky.push_back(static_cast<int>(idx));
    } else if (var[idx] < instance.sigma_bar_sq) {
      c = SafetyPartition::Class::SafeSuboptimal;
      part.safe_suboptimal.push_back(static_cast<int>(idx));
    } else {
      c = SafetyPartition::Class::UnsafeSuboptimal;
      part.unsafe_suboptimal.push_back(static_cast<int>(idx));
    }
    part.solution_class[idx] = c;
  }
  return part;
}

}  // namespace pascomb
