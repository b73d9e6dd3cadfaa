#pragma once

#include <cstdint>
#include <span>

#include "pascomb/solution.hpp"

namespace pascomb {

/*
Law-of-iterated-logarithm confidence machinery.

  lil(t, rho) = (1+sqrt(eps)) * sqrt( (1+eps)/(2t) * ln( ln((1+eps)t) / rho ) )

Mean radius       alpha(t)  = lil(t, omega_mu)
Variance radii    beta_u(t) = 3 lil(t, omega_v)   (upper, drives splitting)
                  beta_l(t) = 3 lil(t, omega_v')  (lower, certifies unsafeness)

Item bounds:  U^mu = mu_hat + alpha, L^mu = mu_hat - alpha,
              U^v  = min{var_hat + beta_u, sigma_sq},  L^v = max{var_hat - beta_l, 0}.

When ln((1+eps)t)/rho < 1 the outer logarithm is negative and the radius is
reported as +infinity (vacuous). The >=2-pull initialization plus the
omega = O(1/T^2) schedule keeps default runs away from this branch.
*/

struct LilConfig {
  double epsilon = 0.01;  // the paper never fixes eps; small eps tightens radii
  double omega_mu = 0.0;
  double omega_v = 0.0;
  double omega_v_prime = 0.0;
};

struct Omegas {
  double omega_mu = 0.0;
  double omega_v = 0.0;
  double omega_v_prime = 0.0;
};

/// lil(t, rho); throws std::invalid_argument when t == 0.
double lil(long long t, double rho, double epsilon);

struct Radii {
  double alpha;
  double beta_u;
  double beta_l;
};

Radii radii(long long t, const LilConfig& config);

/// xi(omega) = (2+eps)/eps * (omega / ln(1+eps))^(1+eps); strictly increasing
/// in omega, xi(0) = 0.
double xi(double omega, double epsilon);

/// Default confidence-parameter schedule for horizon T and confidence
/// delta_T: omega_mu = omega_v' = 1/T^2, omega_v = delta_T/T^2.
Omegas default_omegas(long long T, double delta_T);

/// Running per-item statistics. Population variance (divide by pulls), with
/// compensated accumulation so long-horizon statistics replay bit-identically.
struct ItemStats {
  long long pulls = 0;
  double sum = 0.0;
  double sum_c = 0.0;     // Kahan compensation for sum
  double sum_sq = 0.0;
  double sum_sq_c = 0.0;  // Kahan compensation for sum_sq

  double mean() const { return sum / static_cast<double>(pulls); }
  /// (sum of squares)/pulls - mean^2, clamped at 0 against rounding.
  double variance() const;
};

/// Accumulates one reward; throws std::invalid_argument outside [0,1].
void update(ItemStats& stats, double reward);

struct ItemBounds {
  double u_mu = 0.0;
  double l_mu = 0.0;
  double u_var = 0.0;
  double l_var = 0.0;
  double mu_hat = 0.0;
  double var_hat = 0.0;
};

/// Bounds after at least one pull; throws std::invalid_argument when
/// stats.pulls == 0 (bounds undefined before the first pull).
ItemBounds item_bounds(const ItemStats& stats, const LilConfig& config, double sigma_sq);

struct SolutionBounds {
  double u_mu = 0.0;
  double l_mu = 0.0;
  double u_var = 0.0;
  double l_var = 0.0;
  double mu_hat = 0.0;
  double var_hat = 0.0;
};

/// Plain sums of the item quantities over the members of `s`.
SolutionBounds solution_bounds(std::span<const ItemBounds> bounds, Mask s);

/// Lemma-style inversion: the threshold
///   m = gamma/(u^2 x^2) (2 ln(1/omega) + lnln_+(1/x^2) + ln(2 gamma (1+eps)/u^2)),
/// gamma = (1+eps)(1+sqrt(eps))^2 / 2, such that u*x > lil(t, omega) for all
/// t > m. lnln_+(y) = ln ln y for y >= e, else 0.
double lil_inversion_m(double x, double omega, double u, double epsilon);

/// ln ln x for x >= e, 0 otherwise.
double ln_ln_plus(double x);

}  // namespace pascomb
