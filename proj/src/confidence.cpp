#include "pascomb/confidence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pascomb {

double ln_ln_plus(double x) {
  return x >= std::exp(1.0) ? std::log(std::log(x)) : 0.0;
}

double lil(long long t, double rho, double epsilon) {
  if (t <= 0) throw std::invalid_argument("lil: t must be >= 1");
  const double td = static_cast<double>(t);
  const double inner = std::log((1.0 + epsilon) * td);  // > 0 for t >= 1
  const double arg = inner / rho;
  if (arg < 1.0) return std::numeric_limits<double>::infinity();  // vacuous radius
  return (1.0 + std::sqrt(epsilon)) *
         std::sqrt((1.0 + epsilon) / (2.0 * td) * std::log(arg));
}

Radii radii(long long t, const LilConfig& config) {
  return Radii{lil(t, config.omega_mu, config.epsilon),
               3.0 * lil(t, config.omega_v, config.epsilon),
               3.0 * lil(t, config.omega_v_prime, config.epsilon)};
}

double xi(double omega, double epsilon) {
  if (omega < 0.0) throw std::invalid_argument("xi: omega must be >= 0");
  if (omega == 0.0) return 0.0;
  return (2.0 + epsilon) / epsilon *
         std::pow(omega / std::log1p(epsilon), 1.0 + epsilon);
}

Omegas default_omegas(long long T, double delta_T) {
  if (T < 1) throw std::invalid_argument("default_omegas: T must be >= 1");
  if (!(delta_T > 0.0 && delta_T < 1.0)) {
    throw std::invalid_argument("default_omegas: delta_T must lie in (0,1)");
  }
  const double t2 = static_cast<double>(T) * static_cast<double>(T);
  return Omegas{1.0 / t2, delta_T / t2, 1.0 / t2};
}

double ItemStats::variance() const {
  const double m = mean();
  const double v = sum_sq / static_cast<double>(pulls) - m * m;
  return v > 0.0 ? v : 0.0;
}

void update(ItemStats& stats, double reward) {
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw std::invalid_argument("update: reward must lie in [0,1]");
  }
  ++stats.pulls;
  // Kahan-compensated accumulation.
  double y = reward - stats.sum_c;
  double t = stats.sum + y;
  stats.sum_c = (t - stats.sum) - y;
  stats.sum = t;
  y = reward * reward - stats.sum_sq_c;
  t = stats.sum_sq + y;
  stats.sum_sq_c = (t - stats.sum_sq) - y;
  stats.sum_sq = t;
}

ItemBounds item_bounds(const ItemStats& stats, const LilConfig& config, double sigma_sq) {
  if (stats.pulls < 1) {
    throw std::invalid_argument("item_bounds: undefined before the first pull");
  }
  const Radii r = radii(stats.pulls, config);
  ItemBounds b;
  b.mu_hat = stats.mean();
  b.var_hat = stats.variance();
  b.u_mu = b.mu_hat + r.alpha;
  b.l_mu = b.mu_hat - r.alpha;
  b.u_var = std::min(b.var_hat + r.beta_u, sigma_sq);
  b.l_var = std::max(b.var_hat - r.beta_l, 0.0);
  return b;
}

SolutionBounds solution_bounds(std::span<const ItemBounds> bounds, Mask s) {
  SolutionBounds out;
  for (int i : items_of(s)) {
    const auto& b = bounds[static_cast<std::size_t>(i)];
    out.u_mu += b.u_mu;
    out.l_mu += b.l_mu;
    out.u_var += b.u_var;
    out.l_var += b.l_var;
    out.mu_hat += b.mu_hat;
    out.var_hat += b.var_hat;
  }
  return out;
}

double lil_inversion_m(double x, double omega, double u, double epsilon) {
  if (!(x > 0.0) || !(u > 0.0)) {
    throw std::invalid_argument("lil_inversion_m: x and u must be > 0");
  }
  const double gamma = (1.0 + epsilon) * (1.0 + std::sqrt(epsilon)) *
                       (1.0 + std::sqrt(epsilon)) / 2.0;
  return gamma / (u * u * x * x) *
         (2.0 * std::log(1.0 / omega) + ln_ln_plus(1.0 / (x * x)) +
          std::log(2.0 * gamma * (1.0 + epsilon) / (u * u)));
}

}  // namespace pascomb
