#include "pascomb/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pascomb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct OmegaDerived {
  double ln_mu;      // ln(1/omega_mu)
  double ln_v;       // ln(1/omega_v)
  double ln_vp;      // ln(1/omega_v')
  double ln_mu_v;    // ln(1/max{omega_mu, omega_v})
  double ln_v_vp;    // ln(1/max{omega_v, omega_v'})
  double ln_max;     // ln(1/max of all three)
  double w_sum;      // sqrt(ln 1/omega_v') + sqrt(ln 1/omega_v)
};

OmegaDerived derive(const Omegas& om) {
  if (!(om.omega_mu > 0.0 && om.omega_mu < 1.0) || !(om.omega_v > 0.0 && om.omega_v < 1.0) ||
      !(om.omega_v_prime > 0.0 && om.omega_v_prime < 1.0)) {
    throw std::invalid_argument("hardness: confidence parameters must lie in (0,1)");
  }
  OmegaDerived d;
  d.ln_mu = std::log(1.0 / om.omega_mu);
  d.ln_v = std::log(1.0 / om.omega_v);
  d.ln_vp = std::log(1.0 / om.omega_v_prime);
  d.ln_mu_v = std::min(d.ln_mu, d.ln_v);
  d.ln_v_vp = std::min(d.ln_v, d.ln_vp);
  d.ln_max = std::min({d.ln_mu, d.ln_v, d.ln_vp});
  d.w_sum = std::sqrt(d.ln_vp) + std::sqrt(d.ln_v);
  return d;
}

/// Shared shape of the per-item g/h bounds. `gap` is the class's composite
/// gap, `denom` the per-split budget scale, `ln_w` the ln(1/omega) of the
/// class's dominating confidence parameter (for the parenthesized factor) and
/// `d_coef` the mixed-regime coefficient (4 for safe-suboptimal, 3 for risky
/// and unsafe-suboptimal).
struct ClassShape {
  double gap;
  double denom;
  double x_factor;
  double d_coef;
};

double paren_factor(double gap, double ln_w, double d_const_v) {
  return 2.0 + (ln_ln_plus(1.0 / (ln_w * gap * gap)) + d_const_v) / ln_w;
}

}  // namespace

double a_j(int j) {
  if (j < 1) throw std::invalid_argument("a_j: j must be >= 1");
  return 4.0 / std::pow(9.0, j - 2);
}

double b_j(int j) {
  if (j < 1) throw std::invalid_argument("b_j: j must be >= 1");
  return std::pow(4.0, -j);
}

double series_constant_c() {
  // a_j/b_j = 144 (4/9)^(j-1): geometric. Truncate when the exact tail
  // term/(1 - 4/9) falls below 1e-12 of the partial sum.
  double sum = 0.0;
  double term = 144.0;
  for (int j = 1; j < 1000; ++j) {
    sum += term;
    term *= 4.0 / 9.0;
    if (term / (1.0 - 4.0 / 9.0) < 1e-12 * sum) break;
  }
  return sum;
}

double gamma_const(double epsilon) {
  const double s = 1.0 + std::sqrt(epsilon);
  return (1.0 + epsilon) * s * s / 2.0;
}

double d_const(int K, double epsilon) {
  const double s = 1.0 + std::sqrt(epsilon);
  return std::log(324.0 * static_cast<double>(K) * static_cast<double>(K) *
                  (1.0 + epsilon) * (1.0 + epsilon) * s * s);
}

double m_j(int j, double x, double omega, int K, double epsilon) {
  if (!(x > 0.0) || !std::isfinite(x)) return kInf;
  const double kd = static_cast<double>(K);
  return a_j(j) * gamma_const(epsilon) * kd * kd / (x * x) *
         (2.0 * std::log(1.0 / omega) + ln_ln_plus(1.0 / (x * x)) + d_const(K, epsilon));
}

std::optional<double> composite_gap(SolClass cls, int item, const GapTable& gaps,
                                    const std::vector<Mask>& family,
                                    const SafetyPartition& partition,
                                    const Omegas& omegas) {
  const OmegaDerived d = derive(omegas);
  switch (cls) {
    case SolClass::Star:
      return gaps.delta_v_star;
    case SolClass::Risky:
      return gaps.delta_v_risky[static_cast<std::size_t>(item)];
    case SolClass::SafeSuboptimal:
    case SolClass::UnsafeSuboptimal: {
      const auto& indices = cls == SolClass::SafeSuboptimal ? partition.safe_suboptimal
                                                            : partition.unsafe_suboptimal;
      const double ln_var = cls == SolClass::SafeSuboptimal ? d.ln_v : d.ln_vp;
      std::optional<double> best;
      for (int idx : indices) {
        if (!contains(family[static_cast<std::size_t>(idx)], item)) continue;
        const double g = std::max(gaps.delta[static_cast<std::size_t>(idx)] / std::sqrt(d.ln_mu),
                                  gaps.delta_v[static_cast<std::size_t>(idx)] /
                                      (3.0 * std::sqrt(ln_var)));
        if (!best || g < *best) best = g;
      }
      return best;
    }
  }
  return std::nullopt;
}

namespace {

ClassShape class_shape(SolClass cls, double gap, const OmegaDerived& d, int K,
                       double sigma_bar_sq, double epsilon) {
  const double dc = d_const(K, epsilon);
  switch (cls) {
    case SolClass::SafeSuboptimal:
      return ClassShape{gap, sigma_bar_sq / (3.0 * std::sqrt(d.ln_v)),
                        paren_factor(gap, d.ln_mu_v, dc), 4.0};
    case SolClass::Risky: {
      const double g3 = gap / (3.0 * std::sqrt(d.ln_vp));
      return ClassShape{g3, sigma_bar_sq / (3.0 * d.w_sum),
                        paren_factor(g3, d.ln_v_vp, dc), 3.0};
    }
    case SolClass::UnsafeSuboptimal:
      return ClassShape{gap, sigma_bar_sq / (3.0 * d.w_sum),
                        paren_factor(gap, d.ln_max, dc), 3.0};
    case SolClass::Star:
      break;
  }
  throw std::logic_error("class_shape: S* has its own closed form");
}

}  // namespace

double g_eval(SolClass cls, int r, double gap, const Omegas& omegas, int K,
              double sigma_bar_sq, double epsilon) {
  if (r < 1) throw std::invalid_argument("g_eval: r must be >= 1");
  if (!(gap > 0.0)) throw std::invalid_argument("g_eval: gap must be > 0");
  const OmegaDerived d = derive(omegas);
  const double c = series_constant_c();
  const double gk = gamma_const(epsilon) * static_cast<double>(K);
  if (cls == SolClass::Star) {
    const double den = (static_cast<double>(r) - 1.0) * sigma_bar_sq + gap;
    return 9.0 * c * gk / (den * den) *
           (2.0 * d.ln_v + ln_ln_plus(1.0 / (gap * gap)) + d_const(K, epsilon));
  }
  const ClassShape s = class_shape(cls, gap, d, K, sigma_bar_sq, epsilon);
  const int cp = static_cast<int>(std::floor(s.gap / s.denom));
  if (r >= cp + 2) {
    const double den = (static_cast<double>(r) - 1.0) * s.denom;
    return c * gk / (den * den) * s.x_factor;
  }
  return c * gk / (s.gap * s.gap) * s.x_factor;
}

double h_eval(SolClass cls, int r_prime, double gap, const Omegas& omegas, int K,
              int big_q, double sigma_bar_sq, double epsilon, HBranch* info) {
  if (r_prime < 1 || r_prime > big_q) {
    throw std::invalid_argument("h_eval: r' must lie in [Q]");
  }
  if (!(gap > 0.0)) throw std::invalid_argument("h_eval: gap must be > 0");
  if (r_prime == big_q) {  // empty tail sum
    if (info) *info = HBranch{0.0, "r'=Q", false};
    return 0.0;
  }
  const OmegaDerived d = derive(omegas);
  const double c = series_constant_c();
  const double gk = gamma_const(epsilon) * static_cast<double>(K);
  const double rp = static_cast<double>(r_prime);

  if (cls == SolClass::Star) {
    const double x = 2.0 * d.ln_v + ln_ln_plus(1.0 / (gap * gap)) + d_const(K, epsilon);
    double value;
    std::string branch;
    if (r_prime >= 2) {
      value = 18.0 * c * gk / ((rp - 1.0) * sigma_bar_sq * sigma_bar_sq) * x;
      branch = "r'>=2";
    } else {
      value = 18.0 * c * gk / (gap * gap) * x;
      branch = "r'=1";
    }
    if (info) *info = HBranch{value, branch, false};
    return value;
  }

  const ClassShape s = class_shape(cls, gap, d, K, sigma_bar_sq, epsilon);
  const int cp = static_cast<int>(std::floor(s.gap / s.denom));
  const double base = c * gk * s.x_factor;

  // The piecewise cases overlap at boundary integers; the minimum of the
  // applicable branches is taken and the overlap flagged.
  double best = kInf;
  std::string branch;
  int applicable = 0;
  auto consider = [&](double v, const char* name) {
    ++applicable;
    if (v < best) {
      best = v;
      branch = name;
    }
  };
  if (cp >= big_q - 3) {
    consider((static_cast<double>(big_q) - rp) * base / (s.gap * s.gap), "cp>=Q-3");
  }
  // The whole tail lies past the changing point: valid for any r' >= cp+2,
  // including Q-1 (the stated piecewise stops at Q-2 but the derivation does
  // not depend on it).
  if (r_prime >= cp + 2) {
    consider(2.0 * base / ((rp - 1.0) * s.denom * s.denom), "cp+2<=r'");
  }
  if (cp == 0 && r_prime == 1) {
    consider(3.0 * base / (s.gap * s.gap), "cp=0,r'=1");
  }
  const bool overlap = applicable > 1;
  if (applicable == 0) {
    // Genuine mixed regime r' <= cp+1: the tail crosses the changing point.
    // Positive there: (r'-1)/gap <= cp/gap <= 1/denom < d_coef/denom.
    best = base * (s.d_coef / (s.denom * s.gap) - (rp - 1.0) / (s.gap * s.gap));
    branch = "mixed";
  }
  if (info) *info = HBranch{best, branch, overlap};
  return best;
}

double hardness_h(int r_prime, const World& world, const GapTable& gaps,
                  const Omegas& omegas, double epsilon) {
  const int L = world.instance.num_items();
  const double budget = world.instance.sigma_bar_sq;
  double total = static_cast<double>(cardinality(world.partition.s_star)) *
                 h_eval(SolClass::Star, r_prime, gaps.delta_v_star, omegas,
                        world.instance.K, world.big_q, budget, epsilon);
  for (int i = 0; i < L; ++i) {
    for (SolClass cls :
         {SolClass::SafeSuboptimal, SolClass::Risky, SolClass::UnsafeSuboptimal}) {
      const auto gap = composite_gap(cls, i, gaps, world.family, world.partition, omegas);
      if (!gap) continue;  // empty class for this item: term skipped
      total += h_eval(cls, r_prime, *gap, omegas, world.instance.K, world.big_q, budget,
                      epsilon);
    }
  }
  return total;
}

HardnessReport evaluate_hardness(const World& world, const GapTable& gaps, long long T,
                                 double delta_T, double epsilon,
                                 const std::optional<Omegas>& omega_override) {
  if (T < 2) throw std::invalid_argument("evaluate_hardness: T must be >= 2");
  const Omegas om = omega_override ? *omega_override : default_omegas(T, delta_T);
  const OmegaDerived d = derive(om);
  const int L = world.instance.num_items();
  const int K = world.instance.K;
  const int big_q = world.big_q;
  const double budget = world.instance.sigma_bar_sq;
  const double c = series_constant_c();
  const double gk = gamma_const(epsilon) * static_cast<double>(K);
  const double dc = d_const(K, epsilon);

  HardnessReport rep;
  rep.big_q = big_q;
  rep.omegas = om;
  rep.epsilon = epsilon;
  rep.mu_star = world.partition.mu_star;
  rep.h_safe_sub.resize(static_cast<std::size_t>(L));
  rep.h_risky.resize(static_cast<std::size_t>(L));
  rep.h_unsafe_sub.resize(static_cast<std::size_t>(L));

  // H(r') and T'_r over r' in [Q]; T'_Q = 0 by convention.
  rep.h_of_r.resize(static_cast<std::size_t>(big_q));
  rep.t_prime.resize(static_cast<std::size_t>(big_q));
  for (int rp = 1; rp <= big_q; ++rp) {
    rep.h_of_r[static_cast<std::size_t>(rp - 1)] = hardness_h(rp, world, gaps, om, epsilon);
  }
  for (int r = 1; r <= big_q; ++r) {
    if (r == big_q) {
      rep.t_prime[static_cast<std::size_t>(r - 1)] = 0.0;
      continue;
    }
    double tp = static_cast<double>(cardinality(world.partition.s_star)) *
                g_eval(SolClass::Star, r, gaps.delta_v_star, om, K, budget, epsilon);
    for (int i = 0; i < L; ++i) {
      for (SolClass cls :
           {SolClass::SafeSuboptimal, SolClass::Risky, SolClass::UnsafeSuboptimal}) {
        const auto gap = composite_gap(cls, i, gaps, world.family, world.partition, om);
        if (!gap) continue;
        tp += g_eval(cls, r, *gap, om, K, budget, epsilon);
      }
    }
    rep.t_prime[static_cast<std::size_t>(r - 1)] = tp;
  }

  // Per-item h contributions at r' = 1 (the ones entering Reg2).
  HBranch info;
  rep.h_star = h_eval(SolClass::Star, 1, gaps.delta_v_star, om, K, big_q, budget, epsilon,
                      &info);
  rep.boundary_overlap = info.boundary_overlap;
  for (int i = 0; i < L; ++i) {
    auto fill = [&](SolClass cls, std::optional<double>& slot) {
      const auto gap = composite_gap(cls, i, gaps, world.family, world.partition, om);
      if (!gap) return;
      slot = h_eval(cls, 1, *gap, om, K, big_q, budget, epsilon, &info);
      rep.boundary_overlap = rep.boundary_overlap || info.boundary_overlap;
    };
    fill(SolClass::SafeSuboptimal, rep.h_safe_sub[static_cast<std::size_t>(i)]);
    fill(SolClass::Risky, rep.h_risky[static_cast<std::size_t>(i)]);
    fill(SolClass::UnsafeSuboptimal, rep.h_unsafe_sub[static_cast<std::size_t>(i)]);
  }

  // Regret due to suboptimality, with the explicit constants. The second sum
  // weights each item by its tension parameter; the omega-weighted form of
  // the proof reduces to the plain one under the default schedule where
  // omega_mu = omega_v'.
  const double w_bar = std::sqrt(d.ln_vp / d.ln_mu);
  double reg1 = 0.0;
  for (int i = 0; i < L; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (!contains(world.partition.s_star, i) && gaps.delta_safe_sub_min[ui]) {
      const double dmin = *gaps.delta_safe_sub_min[ui];
      reg1 += 2.0 * c * gk / dmin *
              (2.0 * d.ln_mu + ln_ln_plus(1.0 / (dmin * dmin)) + dc);
    }
    if (gaps.delta_unsafe_sub_min[ui]) {
      double dbar_prime = kInf;
      double ci = 0.0;
      for (int idx : world.partition.unsafe_suboptimal) {
        if (!contains(world.family[static_cast<std::size_t>(idx)], i)) continue;
        const double ds = gaps.delta[static_cast<std::size_t>(idx)];
        const double dvs = gaps.delta_v[static_cast<std::size_t>(idx)];
        const double mixed = std::max(w_bar * ds, dvs / 3.0);
        dbar_prime = std::min(dbar_prime, mixed);
        ci = std::max(ci, (ds / mixed) * (ds / mixed));
      }
      const double dmin = *gaps.delta_unsafe_sub_min[ui];
      reg1 += 2.0 * ci * c * gk / dmin *
              (2.0 * d.ln_vp + ln_ln_plus(1.0 / (dbar_prime * dbar_prime)) + dc);
    }
  }
  rep.reg1 = reg1;
  rep.reg2 = 2.0 * rep.mu_star * rep.h_of_r[0];
  rep.reg3 = 2.0 * rep.mu_star * static_cast<double>(L) *
             (1.0 + static_cast<double>(T) *
                        (xi(om.omega_mu, epsilon) + 2.0 * xi(om.omega_v, epsilon) +
                         2.0 * xi(om.omega_v_prime, epsilon)));
  rep.naive = static_cast<double>(T) * rep.mu_star;

  double dv_min = kInf;
  for (double dv : gaps.delta_v) dv_min = std::min(dv_min, dv);
  const double td = static_cast<double>(T);
  rep.pi_sqrt_term = std::sqrt(static_cast<double>(K) * static_cast<double>(L) * td *
                               std::log(td));
  rep.pi_delta_term = static_cast<double>(L) * static_cast<double>(K) *
                      static_cast<double>(K) / (dv_min * dv_min) * std::log(1.0 / delta_T);
  return rep;
}

}  // namespace pascomb
