#include "pascomb/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pascomb/config.hpp"
#include "pascomb/experiment.hpp"
#include "pascomb/hardness.hpp"
#include "pascomb/io.hpp"

namespace pascomb {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir);
}

json partition_json(const World& world, const std::vector<std::string>& warnings) {
  json j;
  j["s_star"] = format_solution_cell(world.partition.s_star);
  j["mu_star"] = world.partition.mu_star;
  j["q"] = world.q;
  j["Q"] = world.big_q;
  j["num_solutions"] = world.family.size();
  auto names = [&](const std::vector<int>& idx) {
    json arr = json::array();
    for (int i : idx) arr.push_back(format_solution_cell(world.family[static_cast<std::size_t>(i)]));
    return arr;
  };
  j["safe_suboptimal"] = names(world.partition.safe_suboptimal);
  j["risky"] = names(world.partition.risky);
  j["unsafe_suboptimal"] = names(world.partition.unsafe_suboptimal);
  json warn = json::array();
  for (const auto& w : warnings) warn.push_back(w);
  if (world.partition.tie_warning) {
    warn.push_back("optimal safe solution is not unique; canonical tie-break applied");
  }
  j["warnings"] = warn;
  return j;
}

struct SimulateOptions {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int parallel = 1;
  std::optional<std::int64_t> T;
  std::optional<double> delta;
  std::optional<std::string> algorithm;
  std::optional<double> sigma_bar_sq;
};

int cmd_analyze(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  LoadedConfig cfg = load_config_file(config_path);
  ensure_dir(out_dir);
  const World world = World::make(cfg.instance);
  const auto T = cfg.T.value_or(100000);
  const auto delta = cfg.delta.value_or(0.05);
  const GapTable gaps = compute_gaps(world.instance, world.family, world.partition, T, delta);

  json j = partition_json(world, cfg.warnings);
  j["gap_horizon_T"] = T;
  j["gap_delta"] = delta;
  write_text_file(out_dir + "/partition.json", j.dump(2) + "\n");
  write_gap_table_csv(out_dir + "/gaps.csv", gaps, world.family);
  out << "S* = " << format_solution(world.partition.s_star)
      << "  mu* = " << world.partition.mu_star << "\n";
  for (const auto& w : cfg.warnings) out << "warning: " << w << "\n";
  if (world.partition.tie_warning) out << "warning: optimal safe solution tie\n";
  out << "wrote " << out_dir << "/partition.json, " << out_dir << "/gaps.csv\n";
  return kOk;
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
  LoadedConfig cfg = load_config_file(opt.config_path);
  Instance inst = cfg.instance;
  if (opt.sigma_bar_sq) {
    std::vector<std::string> warnings;
    inst = Instance::make(inst.item_means, inst.item_variances, inst.reward_models[0], inst.K,
                          inst.family, *opt.sigma_bar_sq, inst.sigma_sq, &warnings);
  }
  RunConfig rc;
  rc.world = std::make_shared<World>(World::make(std::move(inst)));
  rc.algorithm = opt.algorithm ? algorithm_from_string(*opt.algorithm)
                               : cfg.algorithm.value_or(Algorithm::PASComb);
  rc.T = opt.T.value_or(cfg.T.value_or(100000));
  rc.delta = opt.delta.value_or(cfg.delta.value_or(0.05));
  rc.epsilon = cfg.epsilon.value_or(0.01);
  rc.master_seed = opt.seed;
  rc.replications = cfg.reps.value_or(1);

  ensure_dir(opt.out_dir);
  const std::string trace_path = opt.out_dir + "/trace.csv";
  for (int r = 0; r < rc.replications; ++r) {
    const Trace trace = simulate_run(rc, r);
    write_trace_csv(trace_path, trace, r, /*append=*/r > 0);
  }
  const Aggregate agg = monte_carlo(rc, opt.parallel);
  write_aggregate_csv(opt.out_dir + "/aggregate.csv", agg);

  json j;
  j["config"] = {{"path", opt.config_path},
                 {"algorithm", to_string(rc.algorithm)},
                 {"T", rc.T},
                 {"delta", rc.delta},
                 {"epsilon", rc.epsilon},
                 {"seed", rc.master_seed},
                 {"reps", rc.replications},
                 {"sigma_bar_sq", rc.world->instance.sigma_bar_sq}};
  j["any_violation_rate"] = agg.any_violation_rate;
  j["any_violation_se"] = agg.any_violation_se;
  j["final_mean_pseudo_regret"] = agg.mean_regret.back();
  j["final_mean_realized_regret"] = agg.mean_realized.back();
  j["final_mean_reward"] = agg.mean_reward.back();
  write_text_file(opt.out_dir + "/summary.json", j.dump(2) + "\n");
  out << "wrote " << trace_path << ", aggregate.csv, summary.json\n";
  return kOk;
}

int cmd_experiment(int id, const std::string& out_dir, std::uint64_t seed, int parallel,
                   std::optional<std::int64_t> T, std::optional<int> reps, std::ostream& out) {
  ensure_dir(out_dir);
  const auto configs = experiment_preset(id, seed, T, reps);
  std::vector<Aggregate> aggregates;
  aggregates.reserve(configs.size());
  json summary;
  summary["experiment"] = id;
  summary["seed"] = seed;
  json per_config = json::array();
  for (const auto& rc : configs) {
    const Aggregate agg = monte_carlo(rc, parallel);
    write_aggregate_csv(out_dir + "/aggregate_" + rc.label + ".csv", agg);
    json cj;
    cj["label"] = rc.label;
    cj["algorithm"] = to_string(rc.algorithm);
    cj["T"] = rc.T;
    cj["reps"] = rc.replications;
    cj["sigma_bar_sq"] = rc.world->instance.sigma_bar_sq;
    cj["any_violation_rate"] = agg.any_violation_rate;
    cj["final_mean_pseudo_regret"] = agg.mean_regret.back();
    cj["final_mean_reward"] = agg.mean_reward.back();
    per_config.push_back(cj);
    aggregates.push_back(agg);
    out << rc.label << ": final regret " << agg.mean_regret.back() << ", violation rate "
        << agg.any_violation_rate << "\n";
  }
  summary["runs"] = per_config;

  // The baseline is the last preset entry; additional-regret series against
  // it for every PASCombUCB entry.
  const Aggregate& baseline = aggregates.back();
  for (std::size_t c = 0; c + 1 < configs.size(); ++c) {
    if (configs[c].algorithm != Algorithm::PASComb) continue;
    const AdditionalRegret ar = additional_regret(aggregates[c], baseline);
    std::string path = out_dir + "/additional_regret_" + configs[c].label + ".csv";
    std::ofstream f(path, std::ios::binary);
    f << "t,additional_regret,se\n";
    for (std::size_t jj = 0; jj < ar.checkpoints.size(); ++jj) {
      f << ar.checkpoints[jj] << ',' << format_double(ar.diff[jj]) << ','
        << format_double(ar.se[jj]) << '\n';
    }
  }

  if (id == 3) {
    // Hardness-scaling fit: final additional regret against 1/(delta_v)^2.
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t c = 0; c + 1 < configs.size(); ++c) {
      const double dv = configs[c].world->instance.sigma_bar_sq - 0.03;
      x.push_back(1.0 / (dv * dv));
      y.push_back(aggregates[c].mean_regret.back() - baseline.mean_regret.back());
    }
    const LinearFit fit = ols_fit(x, y);
    summary["fit"] = {{"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"r_squared", fit.r_squared},
                      {"x", "1/(delta_v)^2"},
                      {"y", "final additional regret"}};
    out << "fit: slope " << fit.slope << ", R^2 " << fit.r_squared << "\n";
  }
  write_text_file(out_dir + "/summary.json", summary.dump(2) + "\n");
  return kOk;
}

int cmd_bounds(const std::string& config_path, std::int64_t T, double delta,
               const std::string& out_dir, std::ostream& out) {
  LoadedConfig cfg = load_config_file(config_path);
  ensure_dir(out_dir);
  const World world = World::make(cfg.instance);
  const GapTable gaps = compute_gaps(world.instance, world.family, world.partition, T, delta);
  const HardnessReport rep = evaluate_hardness(world, gaps, T, delta, cfg.epsilon.value_or(0.01));
  write_text_file(out_dir + "/hardness.json", hardness_report_json(rep));
  write_hardness_csv(out_dir + "/hardness.csv", rep);
  out << "Q = " << rep.big_q << ", H(1) = " << rep.h_of_r.front() << ", Reg2 = " << rep.reg2
      << "\n";
  out << "wrote " << out_dir << "/hardness.json, hardness.csv\n";
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probably anytime-safe combinatorial semi-bandits: analysis, simulation and bounds"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int parallel = 1;
  int experiment_id = 0;
  std::int64_t t_flag = 0;
  double delta_flag = 0.0;
  int reps_flag = 0;
  std::string algorithm_flag;
  double sbs_flag = 0.0;

  auto* analyze = app.add_subcommand("analyze", "classify an instance and write its gap tables");
  analyze->add_option("--config", config_path, "instance config file")->required();
  analyze->add_option("--out", out_dir, "output directory")->required();

  auto* simulate = app.add_subcommand("simulate", "run seeded replications of one configuration");
  simulate->add_option("--config", config_path, "instance/run config file")->required();
  simulate->add_option("--out", out_dir, "output directory")->required();
  simulate->add_option("--seed", seed, "master seed (required for reproducibility)")->required();
  simulate->add_option("--parallel", parallel, "worker pool size");
  auto* sim_t = simulate->add_option("--T", t_flag, "horizon override");
  auto* sim_delta = simulate->add_option("--delta", delta_flag, "confidence override");
  auto* sim_algo = simulate->add_option("--algorithm", algorithm_flag, "pascomb|combucb1");
  auto* sim_sbs = simulate->add_option("--sigma-bar-sq", sbs_flag, "variance budget override");

  auto* experiment = app.add_subcommand("experiment", "run a preset study (1, 2 or 3)");
  experiment->add_option("--id", experiment_id, "preset id")->required()
      ->check(CLI::Range(1, 3));
  experiment->add_option("--out", out_dir, "output directory")->required();
  experiment->add_option("--seed", seed, "master seed")->required();
  experiment->add_option("--parallel", parallel, "worker pool size");
  auto* exp_t = experiment->add_option("--T", t_flag, "horizon override");
  auto* exp_reps = experiment->add_option("--reps", reps_flag, "replications override");

  auto* bounds = app.add_subcommand("bounds", "evaluate the hardness and regret bounds");
  bounds->add_option("--config", config_path, "instance config file")->required();
  bounds->add_option("--T", t_flag, "horizon")->required();
  bounds->add_option("--delta", delta_flag, "confidence parameter")->required();
  bounds->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(config_path, out_dir, out);
    if (simulate->parsed()) {
      SimulateOptions opt;
      opt.config_path = config_path;
      opt.out_dir = out_dir;
      opt.seed = seed;
      opt.parallel = parallel;
      if (*sim_t) opt.T = t_flag;
      if (*sim_delta) opt.delta = delta_flag;
      if (*sim_algo) opt.algorithm = algorithm_flag;
      if (*sim_sbs) opt.sigma_bar_sq = sbs_flag;
      return cmd_simulate(opt, out);
    }
    if (experiment->parsed()) {
      return cmd_experiment(experiment_id, out_dir, seed, parallel,
                            *exp_t ? std::optional<std::int64_t>(t_flag) : std::nullopt,
                            *exp_reps ? std::optional<int>(reps_flag) : std::nullopt, out);
    }
    if (bounds->parsed()) return cmd_bounds(config_path, t_flag, delta_flag, out_dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  err << "no subcommand\n";
  return kConfigError;
}

}  // namespace pascomb
