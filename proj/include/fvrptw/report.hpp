#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fvrptw/acs.hpp"
#include "fvrptw/simulate.hpp"

namespace fvrptw {

inline constexpr const char* kSolveReportFormat = "fvrptw-solve-report/1";
inline constexpr const char* kSweepReportFormat = "fvrptw-sweep-report/1";

struct SolveReport {
  std::string instance_path;
  std::string instance_name;
  AcsParams params;  // `threads` is not serialized
  std::size_t simulation_replications = 0;
  std::uint64_t simulation_seed = 0;
  Solution solution;
  std::vector<std::string> violations;
  std::vector<double> trace;
  std::size_t best_iteration = 0;
  std::optional<SimulationReport> simulation;
  std::optional<double> wall_time_s;
};

nlohmann::json params_to_json(const AcsParams& params);
AcsParams params_from_json(const nlohmann::json& js);

nlohmann::json to_json(const SolveReport& report);
SolveReport solve_report_from_json(const nlohmann::json& js);

// One (cr, seed) run of a sweep.
struct SweepRow {
  double cr = 0.0;
  std::uint64_t seed = 0;
  bool feasible = false;
  double distance = 0.0;
  std::size_t vehicles = 0;
  std::size_t missed_windows = 0;
  std::size_t replications = 0;
  std::optional<NodeId> infeasible_customer;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

// Per-cr summary over the feasible rows at that cr.
struct SweepAggregate {
  double cr = 0.0;
  std::size_t runs = 0;
  std::size_t feasible_runs = 0;
  double mean_distance = 0.0;
  double min_distance = 0.0;
  double max_distance = 0.0;
  double mean_missed_windows = 0.0;
  double mean_vehicles = 0.0;

  friend bool operator==(const SweepAggregate&, const SweepAggregate&) = default;
};

// Groups rows by cr in order of first appearance.
std::vector<SweepAggregate> aggregate_sweep(const std::vector<SweepRow>& rows);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_aggregate_csv(std::ostream& out, const std::vector<SweepAggregate>& aggregates);
std::vector<SweepRow> parse_sweep_csv(std::istream& in);
std::vector<SweepAggregate> parse_aggregate_csv(std::istream& in);

nlohmann::json sweep_to_json(const std::string& instance_path, const AcsParams& params,
                             const std::vector<SweepRow>& rows,
                             const std::vector<SweepAggregate>& aggregates);

}  // namespace fvrptw
