#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "pascomb/classify.hpp"
#include "pascomb/experiment.hpp"
#include "pascomb/gaps.hpp"
#include "pascomb/instance.hpp"

using namespace pascomb;

namespace {

Mask mask_of(std::initializer_list<int> items_1based) {
  Mask m = 0;
  for (int i : items_1based) m |= Mask{1} << (i - 1);
  return m;
}

Instance l3_instance(double budget) {
  // means (.5,.4,.3), vars (.3,.2,.1), K=2. Hand-enumerable: 6 solutions.
  return Instance::make({0.5, 0.4, 0.3}, {0.3, 0.2, 0.1}, RewardModel::PointMass, 2,
                        SolutionFamily::all_subsets(), budget, 0.25);
}

}  // namespace

TEST_CASE("enumeration counts and order") {
  const auto family = enumerate_solutions(SolutionFamily::all_subsets(), 10, 3);
  CHECK(family.size() == 175);  // C(10,1)+C(10,2)+C(10,3)

  for (std::size_t i = 0; i + 1 < family.size(); ++i) {
    CHECK(canonical_less(family[i], family[i + 1]));
  }
  CHECK(std::set<Mask>(family.begin(), family.end()).size() == family.size());
  CHECK(std::count(family.begin(), family.end(), Mask{0}) == 0);

  const auto tiny = enumerate_solutions(SolutionFamily::all_subsets(), 1, 2);
  REQUIRE(tiny.size() == 1);
  CHECK(tiny[0] == mask_of({1}));
}

TEST_CASE("kpath enumeration: two paths of two items") {
  const auto family = enumerate_solutions(SolutionFamily::kpath({2, 2}), 4, 2);
  const std::vector<Mask> expected = {mask_of({1}), mask_of({2}), mask_of({3}),
                                      mask_of({4}), mask_of({1, 2}), mask_of({3, 4})};
  CHECK(family == expected);
}

TEST_CASE("explicit family validation") {
  auto fam = SolutionFamily::explicit_family({mask_of({1, 2}), mask_of({1})});
  CHECK_THROWS_WITH_AS(enumerate_solutions(fam, 2, 2),
                       doctest::Contains("not downward-closed"), std::invalid_argument);

  auto ok = SolutionFamily::explicit_family({mask_of({1, 2}), mask_of({1}), mask_of({2})});
  CHECK(enumerate_solutions(ok, 2, 2).size() == 3);
}

TEST_CASE("downward closure holds for every family kind") {
  const struct {
    SolutionFamily family;
    int L, K;
  } cases[] = {
      {SolutionFamily::all_subsets(), 6, 3},
      {SolutionFamily::kpath({3, 2, 3}), 8, 3},
      {SolutionFamily::explicit_family({mask_of({1}), mask_of({2}), mask_of({3}),
                                        mask_of({1, 2}), mask_of({1, 3}), mask_of({2, 3}),
                                        mask_of({1, 2, 3})}),
       3, 3},
  };
  for (const auto& c : cases) {
    const auto family = enumerate_solutions(c.family, c.L, c.K);
    std::set<Mask> members(family.begin(), family.end());
    for (Mask s : family) {
      for (Mask sub = (s - 1) & s; sub != 0; sub = (sub - 1) & s) {
        CHECK(members.count(sub) == 1);
      }
    }
  }
}

TEST_CASE("solution moments") {
  const Instance set1 = table1_instance(1, 0.4);
  const auto [mu, var] = solution_moments(set1, mask_of({1, 3, 4}));
  CHECK(mu == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(var == doctest::Approx(0.29).epsilon(1e-12));

  const auto [mu1, var1] = solution_moments(set1, mask_of({2}));
  CHECK(mu1 == 0.45);
  CHECK(var1 == 0.24);

  const Instance set2 = table1_instance(2, 0.14);
  for (Mask s : {mask_of({1, 2, 3}), mask_of({4, 7, 10}), mask_of({2, 5, 8})}) {
    CHECK(solution_moments(set2, s).second == doctest::Approx(0.03).epsilon(1e-12));
  }

  CHECK_THROWS_AS(solution_moments(l3_instance(0.45), mask_of({4})), std::out_of_range);
}

TEST_CASE("classification of the Table 1 instances") {
  {
    const Instance inst = table1_instance(1, 0.4);
    const auto family = enumerate_solutions(inst.family, 10, 3);
    const auto part = classify(inst, family);
    CHECK(part.s_star == mask_of({1, 3, 4}));
    CHECK(part.mu_star == doctest::Approx(1.25).epsilon(1e-12));
    bool risky_123 = false;
    for (int idx : part.risky) {
      if (family[static_cast<std::size_t>(idx)] == mask_of({1, 2, 3})) risky_123 = true;
    }
    CHECK(risky_123);
    CHECK_FALSE(part.tie_warning);
  }
  {
    const Instance inst = table1_instance(1, 0.6);
    const auto family = enumerate_solutions(inst.family, 10, 3);
    const auto part = classify(inst, family);
    CHECK(part.s_star == mask_of({1, 2, 3}));
    CHECK(part.mu_star == doctest::Approx(1.35).epsilon(1e-12));
  }
}

TEST_CASE("classification of the 3-item instance") {
  const Instance inst = l3_instance(0.45);
  const auto family = enumerate_solutions(inst.family, 3, 2);
  REQUIRE(family.size() == 6);
  const auto part = classify(inst, family);
  CHECK(part.s_star == mask_of({1, 3}));
  CHECK(part.mu_star == doctest::Approx(0.8).epsilon(1e-12));
  REQUIRE(part.risky.size() == 1);
  CHECK(family[static_cast<std::size_t>(part.risky[0])] == mask_of({1, 2}));
  CHECK(part.safe_suboptimal.size() == 4);  // {1},{2},{3},{2,3}
  CHECK(part.unsafe_suboptimal.empty());
}

TEST_CASE("partition property and safe singletons") {
  for (double budget : {0.4, 0.6, 0.751}) {
    const Instance inst = table1_instance(1, budget);
    const auto family = enumerate_solutions(inst.family, 10, 3);
    const auto part = classify(inst, family);
    CHECK(1 + part.safe_suboptimal.size() + part.risky.size() +
              part.unsafe_suboptimal.size() ==
          family.size());
    // budget > sigma_sq >= max item variance: every singleton is safe.
    for (std::size_t idx = 0; idx < family.size(); ++idx) {
      if (cardinality(family[idx]) == 1) {
        CHECK(part.solution_class[idx] != SafetyPartition::Class::UnsafeSuboptimal);
      }
    }
  }
}

TEST_CASE("no safe solution") {
  // Budget below every item variance leaves even the singletons unsafe.
  std::vector<std::string> warnings;
  const Instance inst = Instance::make({0.5, 0.5}, {0.25, 0.25}, RewardModel::Bernoulli, 2,
                                       SolutionFamily::all_subsets(), 0.2, 0.25, &warnings);
  const auto family = enumerate_solutions(inst.family, 2, 2);
  CHECK_THROWS_WITH_AS(classify(inst, family), "no safe solution", std::runtime_error);
  CHECK(!warnings.empty());  // budget <= sigma_sq was flagged
}

TEST_CASE("gap table on the Table 1 instances") {
  {
    const Instance inst = table1_instance(2, 0.14);
    const auto family = enumerate_solutions(inst.family, 10, 3);
    const auto part = classify(inst, family);
    const auto gaps = compute_gaps(inst, family, part, 100000, 0.05);
    for (std::size_t idx = 0; idx < family.size(); ++idx) {
      if (cardinality(family[idx]) == 3) {
        CHECK(gaps.delta_v[idx] == doctest::Approx(0.11).epsilon(1e-12));
      }
      CHECK(gaps.delta_v[idx] > 0.0);
    }
    // S* is excluded from the suboptimal minima: its own delta is 0 and must
    // not pull any per-item minimum to 0.
    for (const auto& d : gaps.delta_safe_sub_min) {
      if (d) CHECK(*d > 0.0);
    }
  }
  {
    const Instance inst = l3_instance(0.45);
    const auto family = enumerate_solutions(inst.family, 3, 2);
    const auto part = classify(inst, family);
    const auto gaps = compute_gaps(inst, family, part, 1000, 0.05);
    REQUIRE(gaps.delta_v_risky[1].has_value());  // item 2, only risky set {1,2}
    CHECK(*gaps.delta_v_risky[1] == doctest::Approx(0.05).epsilon(1e-9));
    CHECK_FALSE(gaps.delta_unsafe_sub_min[0].has_value());  // unsafe&sub empty
    CHECK_FALSE(gaps.phi[2].has_value());
  }
}

TEST_CASE("psi monotone in T, antitone in delta") {
  const Instance inst = table1_instance(1, 0.4);
  const auto family = enumerate_solutions(inst.family, 10, 3);
  const auto part = classify(inst, family);
  const long long t_grid[] = {100, 1000, 10000, 100000};
  const double d_grid[] = {0.01, 0.05, 0.2};
  for (double d : d_grid) {
    std::optional<double> prev;
    for (long long t : t_grid) {
      const auto gaps = compute_gaps(inst, family, part, t, d);
      REQUIRE(gaps.psi[4].has_value());
      if (prev) CHECK(*gaps.psi[4] >= *prev);
      prev = gaps.psi[4];
    }
  }
  for (long long t : t_grid) {
    std::optional<double> prev;
    for (double d : d_grid) {
      const auto gaps = compute_gaps(inst, family, part, t, d);
      if (prev) CHECK(*gaps.psi[4] <= *prev);
      prev = gaps.psi[4];
    }
  }
}

TEST_CASE("tension parameter c_i lies in (0,1]") {
  const Instance inst = table1_instance(1, 0.4);
  const auto family = enumerate_solutions(inst.family, 10, 3);
  const auto part = classify(inst, family);
  const auto gaps = compute_gaps(inst, family, part, 1000, 0.05);
  for (std::size_t i = 0; i < 10; ++i) {
    if (!gaps.c_i[i]) continue;
    CHECK(*gaps.c_i[i] > 0.0);
    CHECK(*gaps.c_i[i] <= 1.0);
    // c_i = 1 iff some unsafe&suboptimal S containing i has delta >= delta_v/3.
    bool witness = false;
    for (int idx : part.unsafe_suboptimal) {
      if (!contains(family[static_cast<std::size_t>(idx)], static_cast<int>(i))) continue;
      if (gaps.delta[static_cast<std::size_t>(idx)] >=
          gaps.delta_v[static_cast<std::size_t>(idx)] / 3.0) {
        witness = true;
      }
    }
    CHECK((*gaps.c_i[i] == 1.0) == witness);
  }
}

TEST_CASE("beta parameters from moments") {
  {
    const auto [a, b] = beta_params_from_moments(0.3, 0.01);
    CHECK(a == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(b == doctest::Approx(14.0).epsilon(1e-12));
  }
  {
    const auto [a, b] = beta_params_from_moments(0.5, 0.24);
    CHECK(a == doctest::Approx(1.0 / 48.0).epsilon(1e-12));
    CHECK(b == doctest::Approx(1.0 / 48.0).epsilon(1e-12));
  }
  {
    // Near-Bernoulli limit: shapes sink toward 0.
    const auto [a, b] = beta_params_from_moments(0.5, 0.2499999);
    CHECK(a < 1e-5);
    CHECK(b < 1e-5);
  }
  CHECK_THROWS_AS(beta_params_from_moments(0.5, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(beta_params_from_moments(0.5, 0.3), std::invalid_argument);

  // Round trip: the Beta with those shapes has the requested moments.
  for (double mu : {0.1, 0.3, 0.5, 0.62, 0.9}) {
    for (double frac : {0.05, 0.5, 0.95}) {
      const double var = frac * mu * (1.0 - mu);
      const auto [a, b] = beta_params_from_moments(mu, var);
      const double mean_back = a / (a + b);
      const double var_back = a * b / ((a + b) * (a + b) * (a + b + 1.0));
      CHECK(mean_back == doctest::Approx(mu).epsilon(1e-12));
      CHECK(var_back == doctest::Approx(var).epsilon(1e-12));
    }
  }
}

TEST_CASE("degenerate beta moments resolve to bernoulli items") {
  const Instance inst = Instance::make({0.5, 0.3}, {0.25, 0.01}, RewardModel::Beta, 2,
                                       SolutionFamily::all_subsets(), 0.6, 0.25);
  CHECK(inst.reward_models[0] == RewardModel::Bernoulli);
  CHECK(inst.reward_models[1] == RewardModel::Beta);
}

TEST_CASE("kpath instance generator") {
  // Means below 1/2: a higher-mean path carries higher Bernoulli variance,
  // so the intended risky class is realizable.
  std::vector<std::string> warnings;
  const Instance inst = kpath_instance(4, 3, {0.4, 0.35, 0.45, 0.3}, 0.73, &warnings);
  CHECK(inst.num_items() == 12);
  CHECK(inst.K == 3);
  for (int i = 0; i < 12; ++i) {
    const double m = inst.item_means[static_cast<std::size_t>(i)];
    CHECK(inst.item_variances[static_cast<std::size_t>(i)] ==
          doctest::Approx(m * (1.0 - m)).epsilon(1e-12));
  }
  const auto family = enumerate_solutions(inst.family, 12, 3);
  CHECK(family.size() == 4 * 7);
  const auto part = classify(inst, family);

  // Brute-force classification: path 1 optimal-safe, path 2 safe-suboptimal,
  // path 3 the single risky set (its full path only), path 4 safe-suboptimal
  // (the Bernoulli mean-variance coupling cannot make a lower-mean path of
  // the same size unsafe).
  CHECK(part.s_star == mask_of({1, 2, 3}));
  CHECK(part.mu_star == doctest::Approx(1.2).epsilon(1e-12));
  REQUIRE(part.risky.size() == 1);
  CHECK(family[static_cast<std::size_t>(part.risky[0])] == mask_of({7, 8, 9}));
  const auto [mu_r, var_r] = solution_moments(inst, mask_of({7, 8, 9}));
  CHECK(var_r > inst.sigma_bar_sq);
  CHECK(mu_r >= part.mu_star);

  CHECK_THROWS_AS(kpath_instance(4, 3, {0.4, 0.35, 1.2, 0.3}, 0.73, nullptr),
                  std::invalid_argument);
}

TEST_CASE("instance rejects a solution variance exactly at the budget") {
  CHECK_THROWS_WITH_AS(Instance::make({0.5, 0.4}, {0.2, 0.2}, RewardModel::PointMass, 2,
                                      SolutionFamily::all_subsets(), 0.4, 0.25),
                       doctest::Contains("exactly equal"), std::invalid_argument);
}
