#include "pascomb/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pascomb {

namespace {

using nlohmann::json;

std::vector<std::string> split_line(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (line != expected_header) {
    throw std::runtime_error(path + ": unexpected header '" + line + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(split_line(line));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_trace_csv(const std::string& path, const Trace& trace, int run_id, bool append) {
  std::ofstream out(path, append ? std::ios::app | std::ios::binary : std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (!append) {
    out << "run_id,t,phase,subsolution,reward,pseudo_regret_cum,realized_regret_cum,unsafe\n";
  }
  for (const auto& s : trace.steps) {
    out << run_id << ',' << s.t << ',' << s.phase << ',' << format_solution_cell(s.pulled)
        << ',' << format_double(s.reward) << ',' << format_double(s.pseudo_regret_cum) << ','
        << format_double(s.realized_regret_cum) << ',' << (s.unsafe ? 1 : 0) << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  const auto rows = read_csv(
      path, "run_id,t,phase,subsolution,reward,pseudo_regret_cum,realized_regret_cum,unsafe");
  std::vector<TraceRow> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != 8) throw std::runtime_error(path + ": malformed trace row");
    TraceRow row;
    row.run_id = std::stoi(r[0]);
    row.t = std::stoll(r[1]);
    row.phase = std::stoll(r[2]);
    row.subsolution = parse_solution_cell(r[3]);
    row.reward = std::stod(r[4]);
    row.pseudo_regret_cum = std::stod(r[5]);
    row.realized_regret_cum = std::stod(r[6]);
    row.unsafe = r[7] == "1";
    out.push_back(row);
  }
  return out;
}

void write_aggregate_csv(const std::string& path, const Aggregate& aggregate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,mean_regret,se_regret,violation_fraction\n";
  for (std::size_t j = 0; j < aggregate.checkpoints.size(); ++j) {
    out << aggregate.checkpoints[j] << ',' << format_double(aggregate.mean_regret[j]) << ','
        << format_double(aggregate.se_regret[j]) << ','
        << format_double(aggregate.violation_fraction[j]) << '\n';
  }
}

std::vector<AggregateRow> read_aggregate_csv(const std::string& path) {
  const auto rows = read_csv(path, "t,mean_regret,se_regret,violation_fraction");
  std::vector<AggregateRow> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != 4) throw std::runtime_error(path + ": malformed aggregate row");
    out.push_back(AggregateRow{std::stoll(r[0]), std::stod(r[1]), std::stod(r[2]),
                               std::stod(r[3])});
  }
  return out;
}

void write_hardness_csv(const std::string& path, const HardnessReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "r_prime,H,T_prime\n";
  for (int rp = 1; rp <= report.big_q; ++rp) {
    out << rp << ',' << format_double(report.h_of_r[static_cast<std::size_t>(rp - 1)]) << ','
        << format_double(report.t_prime[static_cast<std::size_t>(rp - 1)]) << '\n';
  }
}

std::vector<HardnessRow> read_hardness_csv(const std::string& path) {
  const auto rows = read_csv(path, "r_prime,H,T_prime");
  std::vector<HardnessRow> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != 3) throw std::runtime_error(path + ": malformed hardness row");
    out.push_back(HardnessRow{std::stoi(r[0]), std::stod(r[1]), std::stod(r[2])});
  }
  return out;
}

std::string hardness_report_json(const HardnessReport& report) {
  json j;
  j["big_q"] = report.big_q;
  j["epsilon"] = report.epsilon;
  j["mu_star"] = report.mu_star;
  j["omegas"] = {{"omega_mu", report.omegas.omega_mu},
                 {"omega_v", report.omegas.omega_v},
                 {"omega_v_prime", report.omegas.omega_v_prime}};
  j["H"] = report.h_of_r;
  j["T_prime"] = report.t_prime;
  j["bounds"] = {{"reg1", report.reg1},
                 {"reg2", report.reg2},
                 {"reg3", report.reg3},
                 {"naive", report.naive},
                 {"problem_independent",
                  {{"sqrt_term", report.pi_sqrt_term},
                   {"delta_term", report.pi_delta_term},
                   {"note", "shape only, unit constants"}}}};
  auto opt_array = [](const std::vector<std::optional<double>>& v) {
    json arr = json::array();
    for (const auto& x : v) {
      if (x) {
        arr.push_back(*x);
      } else {
        arr.push_back(nullptr);
      }
    }
    return arr;
  };
  j["per_item"] = {{"h_star_per_item", report.h_star},
                   {"h_safe_suboptimal", opt_array(report.h_safe_sub)},
                   {"h_risky", opt_array(report.h_risky)},
                   {"h_unsafe_suboptimal", opt_array(report.h_unsafe_sub)}};
  j["boundary_overlap"] = report.boundary_overlap;
  return j.dump(2) + "\n";
}

void write_gap_table_csv(const std::string& path, const GapTable& gaps,
                         const std::vector<Mask>& family) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "solution,delta,delta_v\n";
  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    out << format_solution_cell(family[idx]) << ',' << format_double(gaps.delta[idx]) << ','
        << format_double(gaps.delta_v[idx]) << '\n';
  }
  out << "\nitem,delta_safe_sub_min,delta_unsafe_sub_min,c_i,delta_v_risky,psi,psi_prime,phi\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("undefined");
  };
  for (std::size_t i = 0; i < gaps.delta_safe_sub_min.size(); ++i) {
    out << (i + 1) << ',' << cell(gaps.delta_safe_sub_min[i]) << ','
        << cell(gaps.delta_unsafe_sub_min[i]) << ',' << cell(gaps.c_i[i]) << ','
        << cell(gaps.delta_v_risky[i]) << ',' << cell(gaps.psi[i]) << ','
        << cell(gaps.psi_prime[i]) << ',' << cell(gaps.phi[i]) << '\n';
  }
}

}  // namespace pascomb
