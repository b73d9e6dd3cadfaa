#include <doctest.h>

#include <cmath>
#include <vector>

#include "pascomb/experiment.hpp"
#include "pascomb/hardness.hpp"

using namespace pascomb;

namespace {

struct Setup {
  World world;
  GapTable gaps;
};

Setup make_setup(int set, double budget, long long T, double delta) {
  Setup s{World::make(table1_instance(set, budget)), {}};
  s.gaps = compute_gaps(s.world.instance, s.world.family, s.world.partition, T, delta);
  return s;
}

}  // namespace

TEST_CASE("series constant") {
  CHECK(std::abs(series_constant_c() - 259.2) < 1e-9);
  CHECK(a_j(1) == doctest::Approx(36.0));
  CHECK(a_j(1) / a_j(2) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(b_j(3) == doctest::Approx(1.0 / 64.0).epsilon(1e-12));
  double prev_a = a_j(1) * 2;
  double prev_b = b_j(1) * 2;
  for (int j = 1; j <= 30; ++j) {
    CHECK(a_j(j) < prev_a);
    CHECK(b_j(j) < prev_b);
    prev_a = a_j(j);
    prev_b = b_j(j);
  }
  CHECK(gamma_const(0.01) == doctest::Approx(0.61105).epsilon(1e-12));
}

TEST_CASE("m_j") {
  const double m1 = m_j(1, 0.1, 1e-6, 3, 0.01);
  const double m2 = m_j(2, 0.1, 1e-6, 3, 0.01);
  CHECK(m1 / m2 == doctest::Approx(9.0).epsilon(1e-12));  // a_1/a_2

  // Halving the gap quadruples m up to the ln-ln term.
  const double mh = m_j(1, 0.05, 1e-6, 3, 0.01);
  CHECK(mh / m1 == doctest::Approx(4.0).epsilon(0.05));

  // x >= 1 kills the ln-ln term.
  const double big = m_j(1, 1.5, 1e-6, 3, 0.01);
  const double expect = a_j(1) * gamma_const(0.01) * 9.0 / (1.5 * 1.5) *
                        (2.0 * std::log(1e6) + d_const(3, 0.01));
  CHECK(big == doctest::Approx(expect).epsilon(1e-12));

  CHECK(std::isinf(m_j(1, 0.0, 1e-6, 3, 0.01)));  // undefined gap
}

TEST_CASE("g functions") {
  const Omegas om{1e-6, 5e-8, 1e-6};
  const double budget = 0.5;
  const int K = 3;
  const double eps = 0.01;

  // g for S* decreases in r: the denominator grows with r.
  double prev = 1e300;
  for (int r = 1; r <= 6; ++r) {
    const double v = g_eval(SolClass::Star, r, 0.2, om, K, budget, eps);
    CHECK(v < prev);
    prev = v;
  }

  // Branch selection across the changing point, against the written-out
  // closed forms. gap/denom picks cp; r = cp+1 uses the gap branch, r = cp+2
  // the (r-1)-denominator branch.
  const double ln_v = std::log(1.0 / om.omega_v);
  const double denom = budget / (3.0 * std::sqrt(ln_v));
  const double gap = 2.5 * denom;  // cp = 2
  const int cp = static_cast<int>(std::floor(gap / denom));
  REQUIRE(cp == 2);
  const double c = series_constant_c();
  const double gk = gamma_const(eps) * K;
  const double ln_mu_v = std::min(std::log(1.0 / om.omega_mu), ln_v);
  const double x_factor =
      2.0 + (ln_ln_plus(1.0 / (ln_mu_v * gap * gap)) + d_const(K, eps)) / ln_mu_v;
  {
    const double got = g_eval(SolClass::SafeSuboptimal, cp + 1, gap, om, K, budget, eps);
    CHECK(got == doctest::Approx(c * gk / (gap * gap) * x_factor).epsilon(1e-12));
  }
  {
    const double got = g_eval(SolClass::SafeSuboptimal, cp + 2, gap, om, K, budget, eps);
    const double den = (cp + 1) * denom;
    CHECK(got == doctest::Approx(c * gk / (den * den) * x_factor).epsilon(1e-12));
  }

  for (SolClass cls : {SolClass::Star, SolClass::SafeSuboptimal, SolClass::Risky,
                       SolClass::UnsafeSuboptimal}) {
    CHECK(g_eval(cls, 1, 0.2, om, 3, budget, eps) > 0.0);
  }
}

TEST_CASE("h functions") {
  const Omegas om{1e-6, 5e-8, 1e-6};
  const double budget = 0.5;
  const int K = 3;
  const double eps = 0.01;
  const int big_q = 4;

  for (SolClass cls : {SolClass::Star, SolClass::SafeSuboptimal, SolClass::Risky,
                       SolClass::UnsafeSuboptimal}) {
    CHECK(h_eval(cls, big_q, 0.2, om, K, big_q, budget, eps) == 0.0);
  }

  // h for S* at r' = 1: the closed form verbatim.
  const double dv = 0.17;
  const double expect = 18.0 * series_constant_c() * gamma_const(eps) * K / (dv * dv) *
                        (2.0 * std::log(1.0 / om.omega_v) + ln_ln_plus(1.0 / (dv * dv)) +
                         d_const(K, eps));
  CHECK(h_eval(SolClass::Star, 1, dv, om, K, big_q, budget, eps) ==
        doctest::Approx(expect).epsilon(1e-12));

  // Non-increasing in r' and dominating the exact tail sum of g.
  for (SolClass cls : {SolClass::Star, SolClass::SafeSuboptimal, SolClass::Risky,
                       SolClass::UnsafeSuboptimal}) {
    for (double gap : {0.02, 0.08, 0.2, 0.45}) {
      for (int q : {2, 3, 5, 8}) {
        double prev = 1e300;
        for (int rp = 1; rp <= q; ++rp) {
          const double h = h_eval(cls, rp, gap, om, K, q, budget, eps);
          CHECK(h >= 0.0);
          CHECK(h <= prev + 1e-12);
          prev = h;
          double tail = 0.0;
          for (int r = rp; r <= q - 1; ++r) {
            tail += g_eval(cls, r, gap, om, K, budget, eps);
          }
          CHECK(h >= tail - 1e-9 * std::max(1.0, tail));
        }
      }
    }
  }
}

TEST_CASE("hardness H on the Table 1 instances") {
  {
    // Q = 1: no safeness-checking regret at all.
    const Setup s = make_setup(1, 0.751, 100000, 0.05);
    REQUIRE(s.world.big_q == 1);
    const auto rep = evaluate_hardness(s.world, s.gaps, 100000, 0.05);
    CHECK(rep.h_of_r.size() == 1);
    CHECK(rep.h_of_r[0] == 0.0);
    CHECK(rep.reg2 == 0.0);
    CHECK(rep.t_prime[0] == 0.0);
  }
  {
    const Setup s = make_setup(1, 0.4, 200000, 0.05);
    REQUIRE(s.world.big_q == 3);
    const auto rep = evaluate_hardness(s.world, s.gaps, 200000, 0.05);
    // H non-increasing in r', T' non-increasing in r, sentinel T'_Q = 0.
    for (std::size_t i = 0; i + 1 < rep.h_of_r.size(); ++i) {
      CHECK(rep.h_of_r[i] >= rep.h_of_r[i + 1]);
      CHECK(rep.t_prime[i] >= rep.t_prime[i + 1]);
    }
    CHECK(rep.t_prime.back() == 0.0);
    CHECK(rep.reg2 == doctest::Approx(2.0 * 1.25 * rep.h_of_r[0]));
    CHECK(rep.naive == doctest::Approx(200000.0 * 1.25).epsilon(1e-12));
    CHECK(rep.reg1 > 0.0);
  }
}

TEST_CASE("H over the Experiment 3 grid is ordered by the variance gap") {
  double budget = 0.14;
  double prev = 1e300;
  for (int k = 0; k <= 9; ++k) {
    const Setup s = make_setup(2, budget, 200000, 0.05);
    const auto rep = evaluate_hardness(s.world, s.gaps, 200000, 0.05);
    CHECK(rep.h_of_r[0] <= prev);
    prev = rep.h_of_r[0];
    budget *= 1.2;
  }
}

TEST_CASE("reg3 at the default schedule settles to 2 mu* L") {
  const Setup s = make_setup(1, 0.4, 1000, 0.05);
  double prev_excess = 1e300;
  for (long long T : {1000LL, 10000LL, 100000LL, 1000000LL}) {
    const GapTable gaps = compute_gaps(s.world.instance, s.world.family, s.world.partition, T,
                                       0.05);
    const auto rep = evaluate_hardness(s.world, gaps, T, 0.05);
    const double base = 2.0 * 1.25 * 10.0;
    const double excess = rep.reg3 / base - 1.0;
    CHECK(excess >= 0.0);
    CHECK(excess < prev_excess);
    prev_excess = excess;
  }
  CHECK(prev_excess < 1e-6);  // T xi(1/T^2) vanished
}

TEST_CASE("H with every per-item class empty is the S* term alone") {
  // L = 1: the family is {{1}}, so S* has no companions in any class.
  Instance inst = Instance::make({0.5}, {0.1}, RewardModel::PointMass, 2,
                                 SolutionFamily::all_subsets(), 0.3, 0.25);
  const World world = World::make(std::move(inst));
  const GapTable gaps = compute_gaps(world.instance, world.family, world.partition, 1000, 0.05);
  const Omegas om = default_omegas(1000, 0.05);
  const double h_star = h_eval(SolClass::Star, 1, gaps.delta_v_star, om, world.instance.K,
                               world.big_q, 0.3, 0.01);
  CHECK(hardness_h(1, world, gaps, om, 0.01) ==
        doctest::Approx(cardinality(world.partition.s_star) * h_star).epsilon(1e-12));
}

TEST_CASE("problem-independent shape") {
  const Setup s = make_setup(1, 0.4, 100000, 0.05);
  const auto rep = evaluate_hardness(s.world, s.gaps, 100000, 0.05);
  CHECK(rep.pi_sqrt_term ==
        doctest::Approx(std::sqrt(3.0 * 10.0 * 100000.0 * std::log(100000.0))).epsilon(1e-12));
  double dv_min = 1e300;
  for (double dv : s.gaps.delta_v) dv_min = std::min(dv_min, dv);
  CHECK(rep.pi_delta_term ==
        doctest::Approx(10.0 * 9.0 / (dv_min * dv_min) * std::log(1.0 / 0.05)).epsilon(1e-12));
}
