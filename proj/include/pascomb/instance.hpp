#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pascomb/solution.hpp"

namespace pascomb {

enum class RewardModel { Beta, Bernoulli, PointMass };

std::string to_string(RewardModel m);
RewardModel reward_model_from_string(const std::string& s);

/// The admissible solution family A_K. Always downward-closed: every
/// nonempty subset of a member is a member.
struct SolutionFamily {
  enum class Kind { AllSubsetsUpToK, KPath, Explicit };

  Kind kind = Kind::AllSubsetsUpToK;
  std::vector<int> path_sizes;            // KPath: consecutive disjoint paths
  std::vector<Mask> explicit_solutions;   // Explicit: validated on enumeration

  static SolutionFamily all_subsets() { return {}; }
  static SolutionFamily kpath(std::vector<int> sizes);
  static SolutionFamily explicit_family(std::vector<Mask> solutions);
};

/// A variance-constrained semi-bandit instance: L items with reward moments,
/// the solution family, the variance budget sigma_bar_sq and the sub-Gaussian
/// proxy sigma_sq used to clip variance UCBs.
struct Instance {
  std::vector<double> item_means;        // in [0,1]
  std::vector<double> item_variances;    // in [0, 1/4]
  std::vector<RewardModel> reward_models;
  int K = 2;
  SolutionFamily family;
  double sigma_bar_sq = 0.0;
  double sigma_sq = 0.25;

  int num_items() const { return static_cast<int>(item_means.size()); }

  /// Validates and returns the instance. Throws std::invalid_argument on a
  /// malformed instance (length mismatch, infeasible moments, a solution with
  /// sigma_S^2 exactly equal to sigma_bar_sq, non-downward-closed family).
  /// A budget sigma_bar_sq <= sigma_sq is accepted with a warning pushed to
  /// `warnings` (the Experiment-3 grid needs such budgets); it degrades the
  /// absolutely-safe guarantee to singleton pulls.
  static Instance make(std::vector<double> means, std::vector<double> variances,
                       RewardModel model, int K, SolutionFamily family,
                       double sigma_bar_sq, double sigma_sq = 0.25,
                       std::vector<std::string>* warnings = nullptr);
};

/// Enumerates the family over ground set [L] in canonical order (cardinality,
/// then lexicographic item indices). Excludes the empty set, contains no
/// duplicates. Throws on an Explicit family that is not downward-closed,
/// naming the missing subset.
std::vector<Mask> enumerate_solutions(const SolutionFamily& family, int L, int K);

/// (mu_S, var_S) = sums of the constituent item moments.
std::pair<double, double> solution_moments(const Instance& instance, Mask s);

/// Beta(alpha, beta) matching a requested (mean, variance):
///   alpha = mu (mu(1-mu)/v - 1),  beta = alpha (1/mu - 1).
/// Requires 0 < mu < 1 and 0 < var < mu(1-mu); throws otherwise.
std::pair<double, double> beta_params_from_moments(double mu, double var);

/// Bernoulli items arranged in `num_paths` disjoint paths of `path_size`
/// items each. means_per_class gives the item mean for the four path classes
/// in order {optimal, safe-suboptimal, risky, unsafe-suboptimal}: path 0 is
/// the optimal path, the remaining paths are assigned to the other three
/// classes in consecutive blocks of near-equal size (earlier classes take the
/// remainder). Throws if a mean is outside (0,1).
Instance kpath_instance(int num_paths, int path_size,
                        const std::vector<double>& means_per_class,
                        double budget,
                        std::vector<std::string>* warnings = nullptr);

}  // namespace pascomb
