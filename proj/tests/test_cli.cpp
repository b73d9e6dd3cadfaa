#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pascomb/cli.hpp"
#include "pascomb/config.hpp"
#include "pascomb/io.hpp"

using namespace pascomb;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

int run(std::initializer_list<std::string> args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  std::vector<std::string> holder{"pascomb"};
  holder.insert(holder.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : holder) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

std::string set1_config(double budget, const std::string& extra = "") {
  std::ostringstream s;
  s << R"({"means": [0.5,0.45,0.4,0.35,0.3,0.3,0.3,0.3,0.3,0.3],
          "variances": [0.24,0.24,0.04,0.01,0.01,0.01,0.01,0.01,0.01,0.01],
          "reward_model": "beta", "K": 3, "family": "subsets",
          "sigma_bar_sq": )"
    << budget << extra << "}";
  return s.str();
}

std::string write_config(const TempDir& dir, const std::string& body) {
  const std::string path = (dir.path / "instance.json").string();
  std::ofstream f(path);
  f << body;
  return path;
}

}  // namespace

TEST_CASE("analyze names the optimal safe solution") {
  TempDir dir("pascomb_cli_analyze");
  const std::string cfg = write_config(dir, set1_config(0.4));
  std::string out;
  const int rc = run({"analyze", "--config", cfg, "--out", dir.str()}, &out);
  CHECK(rc == 0);
  CHECK(out.find("{1,3,4}") != std::string::npos);
  const std::string partition = read_text_file(dir.str() + "/partition.json");
  CHECK(partition.find("\"s_star\": \"1|3|4\"") != std::string::npos);
  CHECK(fs::exists(dir.path / "gaps.csv"));
}

TEST_CASE("config schema errors name the key and exit with 2") {
  TempDir dir("pascomb_cli_schema");
  const std::string cfg = write_config(dir, R"({"means": [0.5], "reward_model": "beta",
      "K": 3, "family": "subsets", "sigma_bar_sq": 0.4})");
  std::string err;
  const int rc = run({"analyze", "--config", cfg, "--out", dir.str()}, nullptr, &err);
  CHECK(rc == 2);
  CHECK(err.find("variances") != std::string::npos);
}

TEST_CASE("explicit family violations name the missing subset") {
  TempDir dir("pascomb_cli_explicit");
  const std::string cfg = write_config(dir, R"({"means": [0.5, 0.4], "variances": [0.1, 0.1],
      "reward_model": "beta", "K": 2, "family": "explicit",
      "solutions": [[1, 2], [1]], "sigma_bar_sq": 0.4})");
  std::string err;
  const int rc = run({"analyze", "--config", cfg, "--out", dir.str()}, nullptr, &err);
  CHECK(rc == 2);
  CHECK(err.find("not downward-closed") != std::string::npos);
  CHECK(err.find("{2}") != std::string::npos);
}

TEST_CASE("simulate is reproducible byte for byte") {
  TempDir dir1("pascomb_cli_sim1");
  TempDir dir2("pascomb_cli_sim2");
  const std::string cfg = write_config(dir1, set1_config(0.4, R"(, "T": 500, "reps": 2)"));
  CHECK(run({"simulate", "--config", cfg, "--out", dir1.str(), "--seed", "7"}) == 0);
  CHECK(run({"simulate", "--config", cfg, "--out", dir2.str(), "--seed", "7"}) == 0);
  CHECK(read_text_file(dir1.str() + "/trace.csv") == read_text_file(dir2.str() + "/trace.csv"));
  CHECK(read_text_file(dir1.str() + "/aggregate.csv") ==
        read_text_file(dir2.str() + "/aggregate.csv"));

  // A different seed must not reproduce the same trace.
  TempDir dir3("pascomb_cli_sim3");
  CHECK(run({"simulate", "--config", cfg, "--out", dir3.str(), "--seed", "8"}) == 0);
  CHECK(read_text_file(dir1.str() + "/trace.csv") != read_text_file(dir3.str() + "/trace.csv"));
}

TEST_CASE("simulate --parallel does not change the aggregate") {
  TempDir dir1("pascomb_cli_par1");
  TempDir dir2("pascomb_cli_par2");
  const std::string cfg = write_config(dir1, set1_config(0.4, R"(, "T": 400, "reps": 4)"));
  CHECK(run({"simulate", "--config", cfg, "--out", dir1.str(), "--seed", "3",
             "--parallel", "1"}) == 0);
  CHECK(run({"simulate", "--config", cfg, "--out", dir2.str(), "--seed", "3",
             "--parallel", "2"}) == 0);
  CHECK(read_text_file(dir1.str() + "/aggregate.csv") ==
        read_text_file(dir2.str() + "/aggregate.csv"));
}

TEST_CASE("combucb1 on a safe-only instance reports zero violations") {
  TempDir dir("pascomb_cli_safe");
  const std::string cfg = write_config(dir, set1_config(0.751, R"(, "T": 300)"));
  CHECK(run({"simulate", "--config", cfg, "--out", dir.str(), "--seed", "5", "--algorithm",
             "combucb1"}) == 0);
  for (const auto& row : read_aggregate_csv(dir.str() + "/aggregate.csv")) {
    CHECK(row.violation_fraction == 0.0);
  }
}

TEST_CASE("simulate requires a seed") {
  TempDir dir("pascomb_cli_seed");
  const std::string cfg = write_config(dir, set1_config(0.4));
  std::string err;
  CHECK(run({"simulate", "--config", cfg, "--out", dir.str()}, nullptr, &err) == 2);
}

TEST_CASE("bounds reports Reg2 = 0 when every solution is absolutely safe") {
  TempDir dir("pascomb_cli_bounds");
  const std::string cfg = write_config(dir, set1_config(0.751));
  std::string out;
  CHECK(run({"bounds", "--config", cfg, "--T", "100000", "--delta", "0.05", "--out",
             dir.str()},
            &out) == 0);
  const std::string report = read_text_file(dir.str() + "/hardness.json");
  CHECK(report.find("\"reg2\": 0.0") != std::string::npos);
  // Echoes the omega schedule for (T, delta) = (1e5, 0.05): 1/T^2 and delta/T^2.
  CHECK(report.find("1e-10") != std::string::npos);
  CHECK(report.find("5.0000000000000005e-12") != std::string::npos);

  const auto rows = read_hardness_csv(dir.str() + "/hardness.csv");
  REQUIRE(rows.size() == 1);  // Q = 1
  CHECK(rows[0].h == 0.0);
  CHECK(rows[0].t_prime == 0.0);
}

TEST_CASE("unwritable output directory is a runtime failure") {
  TempDir dir("pascomb_cli_unwritable");
  const std::string cfg = write_config(dir, set1_config(0.4));
  std::string err;
  const int rc = run({"analyze", "--config", cfg, "--out", "/proc/definitely/not/writable"},
                     nullptr, &err);
  CHECK(rc == 3);
}

TEST_CASE("missing config file") {
  std::string err;
  CHECK(run({"analyze", "--config", "/nonexistent.json", "--out", "/tmp"}, nullptr, &err) == 2);
}
