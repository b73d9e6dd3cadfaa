#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pascomb/confidence.hpp"
#include "pascomb/engine.hpp"
#include "pascomb/gaps.hpp"

namespace pascomb {

/*
Closed-form evaluators for the safeness-checking machinery:

  a_j = 4/9^(j-2), b_j = 1/4^j,  C = sum_j a_j/b_j = 259.2 (geometric, ratio 4/9)
  gamma = (1+eps)(1+sqrt(eps))^2/2
  D = ln(324 K^2 (1+eps)^2 (1+sqrt(eps))^2)
  m_j(x, w) = a_j gamma K^2 / x^2 * (2 ln(1/w) + lnln_+(1/x^2) + D)

The per-class g functions bound the number of phases in which the selected
solution still needs more than r sub-solutions; their tail sums h(r') feed the
hardness parameter H(r', Lambda) and the thresholds T'_r.
*/

double a_j(int j);
double b_j(int j);

/// Truncated sum of a_j/b_j; stops when the geometric tail bound drops below
/// 1e-12 of the partial sum. Equals 259.2 to ~1e-9.
double series_constant_c();

double gamma_const(double epsilon);
double d_const(int K, double epsilon);

/// m_j; +infinity when the gap x is undefined (non-positive or non-finite).
double m_j(int j, double x, double omega, int K, double epsilon);

enum class SolClass { Star, SafeSuboptimal, Risky, UnsafeSuboptimal };

/// Composite per-item gaps entering g and h:
///   SafeSuboptimal:   min over S∋i of max{ delta/sqrt(ln 1/w_mu), delta_v/(3 sqrt(ln 1/w_v)) }
///   UnsafeSuboptimal: same with w_v' in place of w_v
///   Risky:            min over S∋i of delta_v (no omega weighting)
///   Star:             delta_v of S* itself.
std::optional<double> composite_gap(SolClass cls, int item, const GapTable& gaps,
                                    const std::vector<Mask>& family,
                                    const SafetyPartition& partition,
                                    const Omegas& omegas);

/// Per-class g(r, gap): bound on the number of phases with U^v_{A_p} > r*budget
/// attributable to the class. r in [Q-1].
double g_eval(SolClass cls, int r, double gap, const Omegas& omegas, int K,
              double sigma_bar_sq, double epsilon);

/// Applicable-branch bookkeeping for the piecewise h bounds. Where two cases
/// both apply at a boundary integer the minimum is taken and the boundary
/// flagged.
struct HBranch {
  double value = 0.0;
  std::string branch;        // which case supplied the minimum
  bool boundary_overlap = false;
};

/// Per-class h(r', gap) = piecewise closed-form upper bound on
/// sum_{r=r'}^{Q-1} g(r, gap); h(Q, .) = 0.
double h_eval(SolClass cls, int r_prime, double gap, const Omegas& omegas, int K,
              int big_q, double sigma_bar_sq, double epsilon, HBranch* info = nullptr);

struct HardnessReport {
  int big_q = 1;
  Omegas omegas;
  double epsilon = 0.01;
  double mu_star = 0.0;

  // Indexed r' = 1..Q. t_prime[r] for r in [Q-1] is the phase threshold;
  // t_prime at Q is 0 by convention (and T'_0 = infinity, not stored).
  std::vector<double> h_of_r;    // H(r', Lambda)
  std::vector<double> t_prime;   // T'_r

  // Per-item contributions at r' = 1, unset where the class is empty.
  std::vector<std::optional<double>> h_safe_sub;
  std::vector<std::optional<double>> h_risky;
  std::vector<std::optional<double>> h_unsafe_sub;
  double h_star = 0.0;  // per item of S*
  bool boundary_overlap = false;

  double reg1 = 0.0;
  double reg2 = 0.0;   // 2 mu* H(1, Lambda)
  double reg3 = 0.0;   // 2 mu* L (1 + T (xi(w_mu) + 2 xi(w_v) + 2 xi(w_v')))
  double naive = 0.0;  // T mu*
  // Problem-independent shape, unit constants, reported term by term.
  double pi_sqrt_term = 0.0;   // sqrt(K L T ln T)
  double pi_delta_term = 0.0;  // L K^2 / (min_S delta_v)^2 * ln(1/delta_T)
};

/// H(r', Lambda): sum of the h bounds over items and classes, skipping
/// undefined (empty-class) terms.
double hardness_h(int r_prime, const World& world, const GapTable& gaps,
                  const Omegas& omegas, double epsilon);

/// Full evaluation: H(r') and T'_r for r' in [Q], the three regret terms of
/// the problem-dependent bound, the naive bound and the problem-independent
/// shape. Omegas default to the (T, delta_T) schedule.
HardnessReport evaluate_hardness(const World& world, const GapTable& gaps,
                                 long long T, double delta_T, double epsilon = 0.01,
                                 const std::optional<Omegas>& omega_override = std::nullopt);

}  // namespace pascomb
