#include "fvrptw/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "fvrptw/instance_io.hpp"
#include "fvrptw/numfmt.hpp"
#include "fvrptw/simulate.hpp"

namespace fvrptw {

SweepSpec parse_sweep_spec(const std::string& text) {
  SweepSpec spec;
  std::vector<std::string> parts;
  std::istringstream is(text);
  for (std::string p; std::getline(is, p, ':');) parts.push_back(p);
  double v[3];
  if (parts.size() != 3 || !parse_number(parts[0], v[0]) || !parse_number(parts[1], v[1]) ||
      !parse_number(parts[2], v[2]))
    throw std::invalid_argument("sweep must be from:to:step, got '" + text + "'");
  spec.cr_from = v[0];
  spec.cr_to = v[1];
  spec.cr_step = v[2];
  return spec;
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  const auto count = static_cast<std::size_t>(std::floor((spec.cr_to - spec.cr_from) / spec.cr_step + 1e-9)) + 1;
  std::vector<double> grid;
  for (std::size_t k = 0; k < count; ++k) {
    const double cr = spec.cr_from + static_cast<double>(k) * spec.cr_step;
    grid.push_back(std::round(cr * 1e12) / 1e12);
  }
  return grid;
}

void RunConfig::validate() const {
  params.validate();
  if (simulate_n < 1) throw std::invalid_argument("simulation replications must be at least 1");
  if (threads < 1) throw std::invalid_argument("thread count must be at least 1");
  if (sweep) {
    if (!(sweep->cr_step > 0.0)) throw std::invalid_argument("sweep step must be positive");
    if (!(sweep->cr_from <= sweep->cr_to)) throw std::invalid_argument("sweep from must not exceed to");
    if (sweep->cr_from < 0.0 || sweep->cr_to > 1.0) throw std::invalid_argument("sweep range must lie in [0, 1]");
    if (sweep->repeats_per_point < 1) throw std::invalid_argument("repeats must be at least 1");
  }
}

std::uint64_t simulation_seed(std::uint64_t solve_seed) {
  return derive_seed(solve_seed, {0x53494d554c415445ULL});
}

SolveReport solve_and_simulate(const Instance& instance, const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  AcsParams params = config.params;
  params.threads = config.threads;

  SolveResult result = solve(instance, params);

  SolveReport report;
  report.instance_path = config.instance_path.string();
  report.instance_name = instance.name;
  report.params = params;
  report.simulation_replications = config.simulate_n;
  report.simulation_seed = simulation_seed(params.rng_seed);
  report.trace = std::move(result.trace);
  report.best_iteration = result.best_iteration;
  for (const auto& v : validate_solution(result.best, instance, params.cr_star, params.window_basis).violations)
    report.violations.push_back(v.message);
  report.simulation =
      simulate_plan(result.best, instance, config.simulate_n, report.simulation_seed, config.threads);
  report.solution = std::move(result.best);
  if (config.record_wall_time)
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<SweepRow> run_sweep_rows(const Instance& instance, const RunConfig& config) {
  const std::vector<double> grid = sweep_grid(*config.sweep);
  const auto repeats = static_cast<std::size_t>(config.sweep->repeats_per_point);
  const std::size_t jobs = grid.size() * repeats;
  std::vector<SweepRow> rows(jobs);

  auto run = [&](std::size_t job) {
    SweepRow& row = rows[job];
    row.cr = grid[job / repeats];
    row.seed = config.params.rng_seed + job % repeats;

    AcsParams params = config.params;
    params.cr_star = row.cr;
    params.rng_seed = row.seed;
    params.threads = 1;
    try {
      const SolveResult result = solve(instance, params);
      const SimulationReport sim =
          simulate_plan(result.best, instance, config.simulate_n, simulation_seed(row.seed));
      row.feasible = true;
      row.distance = result.best.total_distance;
      row.vehicles = result.best.vehicle_count();
      row.missed_windows = sim.missed_window_total;
      row.replications = sim.replications;
    } catch (const InfeasibleError& e) {
      row.feasible = false;
      row.infeasible_customer = e.customer();
    }
  };

  const std::size_t workers = std::min<std::size_t>(config.threads, jobs);
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) run(j);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t j; (j = next.fetch_add(1)) < jobs;) {
          try {
            run(j);
          } catch (...) {
            errors[j] = std::current_exception();
          }
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

namespace {

// Writes `text` to `path`, or to `out` when the path is empty.
bool emit(const std::string& text, std::ostream& out, std::ostream& err,
          const std::filesystem::path& path) {
  if (path.empty()) {
    out << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) {
    err << "error: cannot write output file '" << path.string() << "'\n";
    return false;
  }
  return true;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << " (first unroutable customer: " << e.customer() << ")\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

std::filesystem::path aggregate_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  p.replace_extension();
  p += ".aggregate.csv";
  return p;
}

}  // namespace

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    if (config.output_format != ReportFormat::Json)
      throw std::invalid_argument("solve reports are only available as json");
    const Instance instance = load_instance(config.instance_path);
    const SolveReport report = solve_and_simulate(instance, config);
    if (!report.violations.empty()) {
      err << "error: solution failed validation: " << report.violations.front() << '\n';
      return kExitInfeasible;
    }
    return emit(to_json(report).dump(2) + "\n", out, err, config.output_path) ? kExitOk
                                                                                      : kExitInputError;
  });
}

int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    if (!config.sweep) throw std::invalid_argument("sweep requires --sweep from:to:step");
    const Instance instance = load_instance(config.instance_path);
    const std::vector<SweepRow> rows = run_sweep_rows(instance, config);
    const std::vector<SweepAggregate> aggregates = aggregate_sweep(rows);

    if (config.output_format == ReportFormat::Json) {
      const auto doc = sweep_to_json(config.instance_path.string(), config.params, rows, aggregates);
      return emit(doc.dump(2) + "\n", out, err, config.output_path) ? kExitOk : kExitInputError;
    }
    std::ostringstream flat, agg;
    write_sweep_csv(flat, rows);
    write_aggregate_csv(agg, aggregates);
    if (config.output_path.empty()) {
      out << flat.str() << '\n' << agg.str();
      return kExitOk;
    }
    const bool ok = emit(flat.str(), out, err, config.output_path) &&
                    emit(agg.str(), out, err, aggregate_path(config.output_path));
    return ok ? kExitOk : kExitInputError;
  });
}

int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    if (config.plan_path.empty()) throw std::invalid_argument("simulate requires --plan");
    const Instance instance = load_instance(config.instance_path);
    const auto routes = load_plan(config.plan_path);
    const Solution plan = make_solution(instance, routes, config.params.cr_star);

    const auto check = validate_solution(plan, instance, config.params.cr_star, config.params.window_basis);
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : check.violations)
      violations.push_back({{"kind", to_string(v.kind)}, {"customer", v.customer_id}, {"message", v.message}});

    const SimulationReport sim =
        simulate_plan(plan, instance, config.simulate_n, simulation_seed(config.params.rng_seed), config.threads);
    nlohmann::json per = nlohmann::json::array();
    for (const auto& c : sim.per_customer)
      per.push_back({{"customer", c.customer_id},
                     {"miss_count", c.miss_count},
                     {"mean_actual_arrival", c.mean_actual_arrival},
                     {"window_close", c.window_close}});
    nlohmann::json routes_js = nlohmann::json::array();
    for (const auto& r : plan.routes) {
      nlohmann::json cred = nlohmann::json::array();
      for (const auto& s : r.stops) cred.push_back(s.window_credibility);
      routes_js.push_back({{"stops", r.sequence()}, {"load", r.total_load}, {"distance", r.total_distance},
                           {"credibilities", cred}});
    }
    const nlohmann::json doc{
        {"format", "fvrptw-simulation-report/1"},
        {"config",
         {{"instance", config.instance_path.string()},
          {"plan", config.plan_path.string()},
          {"cr_star", config.params.cr_star},
          {"seed", config.params.rng_seed},
          {"replications", config.simulate_n}}},
        {"plan", {{"objective", plan.total_distance}, {"routes", routes_js}, {"valid", check.pass()},
                  {"violations", violations}}},
        {"simulation",
         {{"replications", sim.replications},
          {"mean_total_distance", sim.mean_total_distance},
          {"missed_window_total", sim.missed_window_total},
          {"per_customer", per}}},
    };
    return emit(doc.dump(2) + "\n", out, err, config.output_path) ? kExitOk : kExitInputError;
  });
}

int run_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Instance instance = load_instance(config.instance_path);
    double demand = 0.0;
    for (const auto& c : instance.customers) demand += c.demand;
    out << "ok: " << config.instance_path.string() << '\n'
        << "  name: " << (instance.name.empty() ? "-" : instance.name) << '\n'
        << "  customers: " << instance.customer_count() << '\n'
        << "  capacity: " << format_number(instance.vehicle_capacity) << '\n'
        << "  total demand: " << format_number(demand) << '\n'
        << "  depot close: " << format_number(instance.depot_close) << '\n';
    if (const auto stuck = find_unroutable(instance, config.params))
      out << "  warning: customer " << *stuck << " cannot be served alone at Cr* = "
          << format_number(config.params.cr_star) << '\n';
    return kExitOk;
  });
}

}  // namespace fvrptw
