#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fvrptw/acs.hpp"
#include "fvrptw/report.hpp"

namespace fvrptw {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitInputError = 2;

enum class ReportFormat { Json, Csv };

struct SweepSpec {
  double cr_from = 0.0;
  double cr_to = 1.0;
  double cr_step = 0.1;
  int repeats_per_point = 10;
};

// Parses "from:to:step".
SweepSpec parse_sweep_spec(const std::string& text);

// Grid points from..to inclusive, snapped to 1e-12 so that 0.1 steps
// print as 0.3 rather than 0.30000000000000004.
std::vector<double> sweep_grid(const SweepSpec& spec);

struct RunConfig {
  std::filesystem::path instance_path;
  AcsParams params;
  std::size_t simulate_n = 1000;
  std::optional<SweepSpec> sweep;
  std::filesystem::path output_path;  // empty: the caller's stream
  ReportFormat output_format = ReportFormat::Json;
  std::filesystem::path plan_path;    // `simulate` only
  bool record_wall_time = true;
  unsigned threads = 1;

  // Throws std::invalid_argument.
  void validate() const;
};

// Seed of the simulation substream attached to a solve seed.
std::uint64_t simulation_seed(std::uint64_t solve_seed);

// One solve + simulation at params.cr_star. Throws InfeasibleError.
SolveReport solve_and_simulate(const Instance& instance, const RunConfig& config);

// Every (cr, repeat) job of the sweep; repeat r uses seed params.rng_seed + r.
// Jobs run on config.threads workers; output order is fixed.
std::vector<SweepRow> run_sweep_rows(const Instance& instance, const RunConfig& config);

// Subcommands. Documents go to config.output_path, or `out` when it is
// empty; diagnostics go to `err`. Return the process exit code.
int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_validate(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace fvrptw
