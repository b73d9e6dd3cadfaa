#pragma once

#include <optional>
#include <vector>

#include "pascomb/classify.hpp"
#include "pascomb/instance.hpp"

namespace pascomb {

/// Static gap quantities of an instance. Per-item minima/maxima taken over an
/// empty class are left unset ("undefined"); downstream evaluators skip those
/// terms rather than substituting sentinel values.
struct GapTable {
  // Per solution, indexed like the canonical family.
  std::vector<double> delta;    // mean gap mu* - mu_S (0 at S*, negative on risky)
  std::vector<double> delta_v;  // variance gap |var_S - budget|, > 0 everywhere

  double delta_v_star = 0.0;    // variance gap of S*

  // Per item i in [L]; unset when no solution of the class contains i.
  std::vector<std::optional<double>> delta_safe_sub_min;    // min over S∋i safe&sub of delta
  std::vector<std::optional<double>> delta_unsafe_sub_min;  // min over S∋i unsafe&sub of delta
  std::vector<std::optional<double>> c_i;          // max over S∋i unsafe&sub of (delta/max{delta, delta_v/3})^2
  std::vector<std::optional<double>> delta_v_risky;         // min over S∋i risky of delta_v
  std::vector<std::optional<double>> psi;        // max min{ln T/delta^2, 9 ln(T/delta_T)/delta_v^2}
  std::vector<std::optional<double>> psi_prime;  // same with ln(1/delta_T)
  std::vector<std::optional<double>> phi;        // max min{ln T/delta^2, 9 ln T/delta_v^2}, unsafe&sub
};

/// Computes the gap table. Requires T >= 2 and delta_T in (0,1).
GapTable compute_gaps(const Instance& instance, const std::vector<Mask>& family,
                      const SafetyPartition& partition, long long T, double delta_T);

}  // namespace pascomb
