#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

#include "fvrptw/cli.hpp"
#include "fvrptw/generate.hpp"
#include "fvrptw/instance_io.hpp"

using namespace fvrptw;

namespace {

struct CliText {
  std::string sweep;
  std::string format = "json";
  int repeats = 10;
};

void add_common(CLI::App* cmd, RunConfig& cfg, CliText& text) {
  AcsParams& p = cfg.params;
  cmd->add_option("--instance", cfg.instance_path, "Instance file")->required();
  cmd->add_option("--cr", p.cr_star, "Preference index Cr*")->capture_default_str();
  cmd->add_option("--seed", p.rng_seed, "RNG seed")->capture_default_str();
  cmd->add_option("--iterations", p.n_iterations, "ACS iterations")->capture_default_str();
  cmd->add_option("--ants", p.n_ants, "Ants per iteration")->capture_default_str();
  cmd->add_option("--alpha", p.alpha, "Pheromone exponent")->capture_default_str();
  cmd->add_option("--beta", p.beta, "Visibility exponent")->capture_default_str();
  cmd->add_option("--gamma", p.gamma, "Cost-term exponent")->capture_default_str();
  cmd->add_option("--delta", p.delta, "Window-term exponent")->capture_default_str();
  cmd->add_option("--rho", p.rho, "Evaporation rate")->capture_default_str();
  cmd->add_option("--q0", p.q0, "Exploitation threshold")->capture_default_str();
  cmd->add_option("--deposit-q", p.deposit_q, "Pheromone deposit numerator")->capture_default_str();
  cmd->add_option("--pheromone-init", p.pheromone_init, "Initial pheromone: reciprocal (1/c) or constant")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, PheromoneInit>{{"reciprocal", PheromoneInit::Reciprocal},
                                               {"constant", PheromoneInit::Constant}}))
      ->option_text("reciprocal|constant [reciprocal]");
  cmd->add_option("--initial-pheromone", p.initial_pheromone, "Value for constant initialisation")
      ->capture_default_str();
  cmd->add_option("--urgency", p.urgency, "Visibility urgency term: width (l-e) or slack (l-a)")
      ->transform(CLI::CheckedTransformer(std::map<std::string, UrgencyTerm>{
          {"width", UrgencyTerm::WindowWidth}, {"slack", UrgencyTerm::Slack}}))
      ->option_text("width|slack [width]");
  cmd->add_option("--window-basis", p.window_basis,
                  "Arrival component for the window-close check: optimistic or modal")
      ->transform(CLI::CheckedTransformer(std::map<std::string, WindowBasis>{
          {"optimistic", WindowBasis::Optimistic}, {"modal", WindowBasis::Modal}}))
      ->option_text("optimistic|modal [optimistic]");
  cmd->add_option("--sim-n", cfg.simulate_n, "Simulation replications")->capture_default_str();
  cmd->add_option("--sweep", text.sweep, "Cr* grid from:to:step");
  cmd->add_option("--repeats", text.repeats, "Seeds per sweep point")
      ->capture_default_str();
  cmd->add_option("--out", cfg.output_path, "Output file (default: stdout)");
  cmd->add_option("--format", text.format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
  cmd->add_flag("!--no-timing", cfg.record_wall_time, "Omit wall time from solve reports");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy VRPTW solver: credibility-constrained ant colony system"};
  app.require_subcommand(1);

  RunConfig cfg;
  CliText text;

  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance and simulate the best plan");
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve across a grid of Cr* values");
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate an externally supplied plan");
  auto* validate_cmd = app.add_subcommand("validate", "Check an instance file");
  for (auto* cmd : {solve_cmd, sweep_cmd, sim_cmd, validate_cmd}) add_common(cmd, cfg, text);
  sim_cmd->add_option("--plan", cfg.plan_path, "Plan file or solve report")->required();

  GeneratorConfig gen;
  std::uint64_t gen_seed = 1;
  std::string horizon = "long";
  std::string gen_name;
  std::filesystem::path gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "Write a random planar instance");
  gen_cmd->add_option("--customers", gen.customers)->capture_default_str();
  gen_cmd->add_option("--capacity", gen.capacity)->capture_default_str();
  gen_cmd->add_option("--service-time", gen.service_time)->capture_default_str();
  gen_cmd->add_option("--depot-close", gen.depot_close)->capture_default_str();
  gen_cmd->add_option("--horizon", horizon)->check(CLI::IsMember({"long", "short"}))->capture_default_str();
  gen_cmd->add_option("--window-width", gen.window_width)->capture_default_str();
  gen_cmd->add_option("--fuzzy-lo", gen.fuzzy_lo)->capture_default_str();
  gen_cmd->add_option("--fuzzy-hi", gen.fuzzy_hi)->capture_default_str();
  gen_cmd->add_flag("--crisp", gen.crisp, "Degenerate (crisp) travel times");
  gen_cmd->add_option("--seed", gen_seed)->capture_default_str();
  gen_cmd->add_option("--name", gen_name);
  gen_cmd->add_option("--out", gen_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (gen_cmd->parsed()) {
    try {
      gen.horizon = horizon == "short" ? Horizon::Short : Horizon::Long;
      PlanarInstance planar = generate_planar(gen, gen_seed);
      if (!gen_name.empty()) planar.instance.name = gen_name;
      const double lo = gen.crisp ? 1.0 : gen.fuzzy_lo;
      const double hi = gen.crisp ? 1.0 : gen.fuzzy_hi;
      if (gen_out.empty()) {
        write_planar_instance(std::cout, planar, lo, hi);
      } else {
        std::ofstream f(gen_out);
        if (!f) throw std::runtime_error("cannot write '" + gen_out.string() + "'");
        write_planar_instance(f, planar, lo, hi);
      }
      return kExitOk;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInputError;
    }
  }

  cfg.output_format = text.format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
  if (sweep_cmd->parsed()) {
    if (text.sweep.empty()) {
      std::cerr << "error: sweep requires --sweep from:to:step\n";
      return kExitInputError;
    }
    try {
      cfg.sweep = parse_sweep_spec(text.sweep);
      cfg.sweep->repeats_per_point = text.repeats;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInputError;
    }
    return run_sweep(cfg, std::cout, std::cerr);
  }
  if (solve_cmd->parsed()) return run_solve(cfg, std::cout, std::cerr);
  if (sim_cmd->parsed()) return run_simulate(cfg, std::cout, std::cerr);
  return run_validate(cfg, std::cout, std::cerr);
}
