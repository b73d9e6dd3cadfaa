#include "pascomb/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace pascomb {

std::string to_string(RewardModel m) {
  switch (m) {
    case RewardModel::Beta: return "beta";
    case RewardModel::Bernoulli: return "bernoulli";
    case RewardModel::PointMass: return "pointmass";
  }
  return "?";
}

RewardModel reward_model_from_string(const std::string& s) {
  if (s == "beta") return RewardModel::Beta;
  if (s == "bernoulli") return RewardModel::Bernoulli;
  if (s == "pointmass") return RewardModel::PointMass;
  throw std::invalid_argument("unknown reward_model: " + s);
}

SolutionFamily SolutionFamily::kpath(std::vector<int> sizes) {
  SolutionFamily f;
  f.kind = Kind::KPath;
  f.path_sizes = std::move(sizes);
  return f;
}

SolutionFamily SolutionFamily::explicit_family(std::vector<Mask> solutions) {
  SolutionFamily f;
  f.kind = Kind::Explicit;
  f.explicit_solutions = std::move(solutions);
  return f;
}

namespace {

void emit_subsets(Mask path, int max_card, std::vector<Mask>& out) {
  // All nonempty submasks of `path` with cardinality <= max_card.
  for (Mask sub = path; sub != 0; sub = (sub - 1) & path) {
    if (std::popcount(sub) <= max_card) out.push_back(sub);
  }
}

void emit_combinations(int L, int card, std::vector<Mask>& out) {
  std::vector<int> idx(static_cast<std::size_t>(card));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    Mask m = 0;
    for (int i : idx) m |= Mask{1} << i;
    out.push_back(m);
    int k = card - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == L - card + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < card; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace

std::vector<Mask> enumerate_solutions(const SolutionFamily& family, int L, int K) {
  if (L < 1) throw std::invalid_argument("enumerate_solutions: L must be >= 1");
  if (L > kMaxItems) throw std::invalid_argument("enumerate_solutions: L too large");
  if (K < 1) throw std::invalid_argument("enumerate_solutions: K must be >= 1");

  std::vector<Mask> out;
  switch (family.kind) {
    case SolutionFamily::Kind::AllSubsetsUpToK: {
      for (int card = 1; card <= std::min(K, L); ++card) {
        emit_combinations(L, card, out);
      }
      // emit_combinations yields lexicographic order within each cardinality,
      // so the concatenation is already canonical.
      return out;
    }
    case SolutionFamily::Kind::KPath: {
      int offset = 0;
      for (int size : family.path_sizes) {
        if (size < 1) throw std::invalid_argument("kpath: path size must be >= 1");
        Mask path = ((Mask{1} << size) - 1) << offset;
        emit_subsets(path, K, out);
        offset += size;
      }
      if (offset != L) {
        throw std::invalid_argument("kpath: path sizes sum to " + std::to_string(offset) +
                                    " but L = " + std::to_string(L));
      }
      break;
    }
    case SolutionFamily::Kind::Explicit: {
      std::set<Mask> members;
      for (Mask s : family.explicit_solutions) {
        if (s == 0) throw std::invalid_argument("explicit family: empty set is not a solution");
        if (std::popcount(s) > K) {
          throw std::invalid_argument("explicit family: " + format_solution(s) +
                                      " exceeds cardinality K");
        }
        if (items_of(s).back() >= L) {
          throw std::invalid_argument("explicit family: " + format_solution(s) +
                                      " has an item index out of range");
        }
        members.insert(s);
      }
      // Downward closure: removing any single item from a member must yield a
      // member; by induction this covers all nonempty subsets.
      for (Mask s : members) {
        if (std::popcount(s) < 2) continue;
        for (int i : items_of(s)) {
          Mask sub = s & ~(Mask{1} << i);
          if (!members.count(sub)) {
            throw std::invalid_argument("explicit family not downward-closed: " +
                                        format_solution(sub) + " missing (subset of " +
                                        format_solution(s) + ")");
          }
        }
      }
      out.assign(members.begin(), members.end());
      break;
    }
  }
  std::sort(out.begin(), out.end(), canonical_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<double, double> solution_moments(const Instance& instance, Mask s) {
  double mu = 0.0;
  double var = 0.0;
  for (int i : items_of(s)) {
    if (i >= instance.num_items()) {
      throw std::out_of_range("solution_moments: item index " + std::to_string(i + 1) +
                              " out of range");
    }
    mu += instance.item_means[static_cast<std::size_t>(i)];
    var += instance.item_variances[static_cast<std::size_t>(i)];
  }
  return {mu, var};
}

std::pair<double, double> beta_params_from_moments(double mu, double var) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw std::invalid_argument("beta_params_from_moments: mean must lie in (0,1)");
  }
  const double cap = mu * (1.0 - mu);
  if (!(var > 0.0 && var < cap)) {
    throw std::invalid_argument("beta_params_from_moments: infeasible moments, need 0 < var < mu(1-mu)");
  }
  const double alpha = mu * (cap / var - 1.0);
  const double beta = alpha * (1.0 / mu - 1.0);
  return {alpha, beta};
}

Instance Instance::make(std::vector<double> means, std::vector<double> variances,
                        RewardModel model, int K, SolutionFamily family,
                        double sigma_bar_sq, double sigma_sq,
                        std::vector<std::string>* warnings) {
  if (means.empty() || means.size() != variances.size()) {
    throw std::invalid_argument("instance: means and variances must be nonempty and equal-length");
  }
  if (K < 2) throw std::invalid_argument("instance: K must be >= 2");
  if (!(sigma_bar_sq > 0.0)) throw std::invalid_argument("instance: sigma_bar_sq must be > 0");
  if (!(sigma_sq > 0.0)) throw std::invalid_argument("instance: sigma_sq must be > 0");

  Instance inst;
  inst.item_means = std::move(means);
  inst.item_variances = std::move(variances);
  inst.K = K;
  inst.family = std::move(family);
  inst.sigma_bar_sq = sigma_bar_sq;
  inst.sigma_sq = sigma_sq;
  inst.reward_models.resize(inst.item_means.size(), model);

  for (std::size_t i = 0; i < inst.item_means.size(); ++i) {
    const double m = inst.item_means[i];
    const double v = inst.item_variances[i];
    if (!(m >= 0.0 && m <= 1.0)) {
      throw std::invalid_argument("instance: mean of item " + std::to_string(i + 1) +
                                  " outside [0,1]");
    }
    if (!(v >= 0.0)) {
      throw std::invalid_argument("instance: variance of item " + std::to_string(i + 1) +
                                  " is negative");
    }
    if (model == RewardModel::Beta || model == RewardModel::Bernoulli) {
      // Samplable [0,1]-supported models: variance capped by mean(1-mean)
      // (hence by 1/4). PointMass items may carry any variance annotation;
      // it is classification truth only.
      const double cap = m * (1.0 - m);
      if (v > cap + 1e-12) {
        throw std::invalid_argument("instance: variance of item " + std::to_string(i + 1) +
                                    " exceeds mean(1-mean)");
      }
      // Degenerate Beta moments (v == m(1-m)) are a Bernoulli.
      if (model == RewardModel::Beta && v >= cap - 1e-15) {
        inst.reward_models[i] = RewardModel::Bernoulli;
      }
    }
  }

  if (!(sigma_bar_sq > sigma_sq) && warnings != nullptr) {
    warnings->push_back("sigma_bar_sq <= sigma_sq: no solution is absolutely safe; "
                        "singletons are used as the atomic pull unit");
  }

  const auto solutions = enumerate_solutions(inst.family, inst.num_items(), inst.K);
  for (Mask s : solutions) {
    const auto [mu, var] = solution_moments(inst, s);
    (void)mu;
    if (var == inst.sigma_bar_sq) {
      throw std::invalid_argument("instance: solution " + format_solution(s) +
                                  " has variance exactly equal to sigma_bar_sq");
    }
  }
  return inst;
}

Instance kpath_instance(int num_paths, int path_size,
                        const std::vector<double>& means_per_class, double budget,
                        std::vector<std::string>* warnings) {
  if (num_paths < 1 || path_size < 1) {
    throw std::invalid_argument("kpath_instance: need at least one path of at least one item");
  }
  if (means_per_class.size() != 4) {
    throw std::invalid_argument("kpath_instance: means_per_class must list the 4 class means");
  }
  for (double a : means_per_class) {
    if (!(a > 0.0 && a < 1.0)) {
      throw std::invalid_argument("kpath_instance: infeasible Bernoulli mean");
    }
  }
  // Path 0 is the optimal path; the rest split into three consecutive blocks,
  // earlier classes taking the remainder.
  const int rest = num_paths - 1;
  const int base = rest / 3;
  const int rem = rest % 3;
  const int n1 = base + (rem > 0 ? 1 : 0);
  const int n2 = base + (rem > 1 ? 1 : 0);
  std::vector<double> means;
  std::vector<double> variances;
  std::vector<int> sizes;
  for (int p = 0; p < num_paths; ++p) {
    int cls;
    if (p == 0) cls = 0;
    else if (p <= n1) cls = 1;
    else if (p <= n1 + n2) cls = 2;
    else cls = 3;
    const double a = means_per_class[static_cast<std::size_t>(cls)];
    for (int j = 0; j < path_size; ++j) {
      means.push_back(a);
      variances.push_back(a * (1.0 - a));  // Bernoulli moment identity
    }
    sizes.push_back(path_size);
  }
  return Instance::make(std::move(means), std::move(variances), RewardModel::Bernoulli,
                        std::max(path_size, 2), SolutionFamily::kpath(std::move(sizes)),
                        budget, 0.25, warnings);
}

}  // namespace pascomb
