#pragma once

#include <string>
#include <vector>

#include "pascomb/experiment.hpp"
#include "pascomb/gaps.hpp"
#include "pascomb/hardness.hpp"

namespace pascomb {

/*
File contracts (all re-parseable by the readers below):

  trace CSV     run_id,t,phase,subsolution,reward,pseudo_regret_cum,realized_regret_cum,unsafe
  aggregate CSV t,mean_regret,se_regret,violation_fraction
  hardness CSV  r_prime,H,T_prime

Doubles are printed with %.17g so a parse-print cycle is exact.
*/

std::string format_double(double v);

void write_trace_csv(const std::string& path, const Trace& trace, int run_id,
                     bool append = false);

struct TraceRow {
  int run_id;
  std::int64_t t;
  std::int64_t phase;
  Mask subsolution;
  double reward;
  double pseudo_regret_cum;
  double realized_regret_cum;
  bool unsafe;
};
std::vector<TraceRow> read_trace_csv(const std::string& path);

void write_aggregate_csv(const std::string& path, const Aggregate& aggregate);

struct AggregateRow {
  std::int64_t t;
  double mean_regret;
  double se_regret;
  double violation_fraction;
};
std::vector<AggregateRow> read_aggregate_csv(const std::string& path);

void write_hardness_csv(const std::string& path, const HardnessReport& report);

struct HardnessRow {
  int r_prime;
  double h;
  double t_prime;
};
std::vector<HardnessRow> read_hardness_csv(const std::string& path);

/// JSON-shaped key tree for the full hardness report.
std::string hardness_report_json(const HardnessReport& report);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

void write_gap_table_csv(const std::string& path, const GapTable& gaps,
                         const std::vector<Mask>& family);

}  // namespace pascomb
