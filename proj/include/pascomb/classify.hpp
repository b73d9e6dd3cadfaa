#pragma once

#include <string>
#include <vector>

#include "pascomb/instance.hpp"

namespace pascomb {

/// Static classification of the enumerated family:
///   S*            the optimal safe solution (unique argmax of mu_S over the
///                 safe set; ties broken canonically with a warning),
///   safe_suboptimal   S with var_S <  budget and mu_S < mu*,
///   risky             S with mu_S >= mu* and S != S*,
///   unsafe_suboptimal S with var_S >= budget and mu_S < mu*.
/// The four classes plus {S*} partition the family.
struct SafetyPartition {
  Mask s_star = 0;
  int s_star_index = -1;  // index into the canonical family order
  double mu_star = 0.0;
  std::vector<int> safe_suboptimal;
  std::vector<int> risky;
  std::vector<int> unsafe_suboptimal;
  bool tie_warning = false;

  enum class Class { Star, SafeSuboptimal, Risky, UnsafeSuboptimal };
  /// Class of the solution at family index `idx`.
  std::vector<Class> solution_class;
};

/// Classifies `family` (canonical order, as returned by enumerate_solutions).
/// Throws std::runtime_error("no safe solution") when the safe set is empty.
SafetyPartition classify(const Instance& instance, const std::vector<Mask>& family);

std::string to_string(SafetyPartition::Class c);

}  // namespace pascomb
