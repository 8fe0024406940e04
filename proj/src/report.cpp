#include "fvrptw/report.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fvrptw/numfmt.hpp"

namespace fvrptw {

using nlohmann::json;

namespace {

json tfn_json(const Tfn& t) { return json::array({t.a, t.b, t.c}); }
Tfn tfn_from(const json& js) { return {js.at(0).get<double>(), js.at(1).get<double>(), js.at(2).get<double>()}; }

template <class E>
E enum_from(const std::string& s, std::initializer_list<E> values) {
  for (E v : values)
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown enum value '" + s + "'");
}

}  // namespace

json params_to_json(const AcsParams& p) {
  return json{
      {"alpha", p.alpha},
      {"beta", p.beta},
      {"gamma", p.gamma},
      {"delta", p.delta},
      {"rho", p.rho},
      {"q0", p.q0},
      {"ants", p.n_ants},
      {"iterations", p.n_iterations},
      {"deposit_q", p.deposit_q},
      {"cr_star", p.cr_star},
      {"seed", p.rng_seed},
      {"pheromone_init", to_string(p.pheromone_init)},
      {"initial_pheromone", p.initial_pheromone},
      {"urgency", to_string(p.urgency)},
      {"window_basis", to_string(p.window_basis)},
  };
}

AcsParams params_from_json(const json& js) {
  AcsParams p;
  p.alpha = js.at("alpha").get<double>();
  p.beta = js.at("beta").get<double>();
  p.gamma = js.at("gamma").get<double>();
  p.delta = js.at("delta").get<double>();
  p.rho = js.at("rho").get<double>();
  p.q0 = js.at("q0").get<double>();
  p.n_ants = js.at("ants").get<int>();
  p.n_iterations = js.at("iterations").get<int>();
  p.deposit_q = js.at("deposit_q").get<double>();
  p.cr_star = js.at("cr_star").get<double>();
  p.rng_seed = js.at("seed").get<std::uint64_t>();
  p.pheromone_init = enum_from(js.at("pheromone_init").get<std::string>(),
                               {PheromoneInit::Reciprocal, PheromoneInit::Constant});
  p.initial_pheromone = js.at("initial_pheromone").get<double>();
  p.urgency = enum_from(js.at("urgency").get<std::string>(), {UrgencyTerm::WindowWidth, UrgencyTerm::Slack});
  p.window_basis = enum_from(js.at("window_basis").get<std::string>(),
                             {WindowBasis::Optimistic, WindowBasis::Modal});
  return p;
}

json to_json(const SolveReport& r) {
  json routes = json::array();
  for (const auto& route : r.solution.routes) {
    json schedule = json::array();
    json ids = json::array();
    for (const auto& s : route.stops) {
      ids.push_back(s.customer_id);
      schedule.push_back(json{{"customer", s.customer_id},
                              {"arrival", tfn_json(s.arrival)},
                              {"service_start", tfn_json(s.service_start)},
                              {"departure", tfn_json(s.departure)},
                              {"waiting_time", s.waiting_time},
                              {"credibility", s.window_credibility}});
    }
    routes.push_back(json{{"stops", ids},
                          {"load", route.total_load},
                          {"distance", route.total_distance},
                          {"schedule", schedule}});
  }

  json doc{
      {"format", kSolveReportFormat},
      {"config",
       {{"instance", r.instance_path},
        {"instance_name", r.instance_name},
        {"params", params_to_json(r.params)},
        {"simulation_replications", r.simulation_replications},
        {"simulation_seed", r.simulation_seed}}},
      {"solution",
       {{"cr_star", r.solution.cr_star},
        {"objective", r.solution.total_distance},
        {"vehicles", r.solution.routes.size()},
        {"valid", r.violations.empty()},
        {"violations", r.violations},
        {"routes", routes}}},
      {"trace", {{"best_iteration", r.best_iteration}, {"best_distance", r.trace}}},
  };
  if (r.simulation) {
    json per = json::array();
    for (const auto& c : r.simulation->per_customer)
      per.push_back(json{{"customer", c.customer_id},
                         {"miss_count", c.miss_count},
                         {"mean_actual_arrival", c.mean_actual_arrival},
                         {"window_close", c.window_close}});
    doc["simulation"] = json{{"replications", r.simulation->replications},
                             {"mean_total_distance", r.simulation->mean_total_distance},
                             {"missed_window_total", r.simulation->missed_window_total},
                             {"per_customer", per}};
  }
  if (r.wall_time_s) doc["wall_time_s"] = *r.wall_time_s;
  return doc;
}

SolveReport solve_report_from_json(const json& js) {
  if (js.at("format").get<std::string>() != kSolveReportFormat)
    throw std::invalid_argument("not a solve report");
  SolveReport r;
  const auto& cfg = js.at("config");
  r.instance_path = cfg.at("instance").get<std::string>();
  r.instance_name = cfg.at("instance_name").get<std::string>();
  r.params = params_from_json(cfg.at("params"));
  r.simulation_replications = cfg.at("simulation_replications").get<std::size_t>();
  r.simulation_seed = cfg.at("simulation_seed").get<std::uint64_t>();

  const auto& sol = js.at("solution");
  r.solution.cr_star = sol.at("cr_star").get<double>();
  r.solution.total_distance = sol.at("objective").get<double>();
  r.violations = sol.at("violations").get<std::vector<std::string>>();
  for (const auto& rj : sol.at("routes")) {
    Route route;
    route.total_load = rj.at("load").get<double>();
    route.total_distance = rj.at("distance").get<double>();
    for (const auto& sj : rj.at("schedule")) {
      StopSchedule s;
      s.customer_id = sj.at("customer").get<NodeId>();
      s.arrival = tfn_from(sj.at("arrival"));
      s.service_start = tfn_from(sj.at("service_start"));
      s.departure = tfn_from(sj.at("departure"));
      s.waiting_time = sj.at("waiting_time").get<double>();
      s.window_credibility = sj.at("credibility").get<double>();
      route.stops.push_back(s);
    }
    r.solution.routes.push_back(std::move(route));
  }

  r.best_iteration = js.at("trace").at("best_iteration").get<std::size_t>();
  r.trace = js.at("trace").at("best_distance").get<std::vector<double>>();

  if (js.contains("simulation")) {
    const auto& sj = js.at("simulation");
    SimulationReport s;
    s.replications = sj.at("replications").get<std::size_t>();
    s.mean_total_distance = sj.at("mean_total_distance").get<double>();
    s.missed_window_total = sj.at("missed_window_total").get<std::size_t>();
    for (const auto& cj : sj.at("per_customer"))
      s.per_customer.push_back({cj.at("customer").get<NodeId>(), cj.at("miss_count").get<std::size_t>(),
                                cj.at("mean_actual_arrival").get<double>(),
                                cj.at("window_close").get<double>()});
    r.simulation = s;
  }
  if (js.contains("wall_time_s")) r.wall_time_s = js.at("wall_time_s").get<double>();
  return r;
}

std::vector<SweepAggregate> aggregate_sweep(const std::vector<SweepRow>& rows) {
  std::vector<SweepAggregate> out;
  for (const auto& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SweepAggregate& a) { return a.cr == row.cr; });
    if (it == out.end()) {
      out.push_back(SweepAggregate{});
      it = out.end() - 1;
      it->cr = row.cr;
    }
    ++it->runs;
  }
  for (auto& agg : out) {
    double sum_d = 0.0, sum_m = 0.0, sum_v = 0.0;
    for (const auto& row : rows) {
      if (row.cr != agg.cr || !row.feasible) continue;
      if (agg.feasible_runs == 0) {
        agg.min_distance = agg.max_distance = row.distance;
      } else {
        agg.min_distance = std::min(agg.min_distance, row.distance);
        agg.max_distance = std::max(agg.max_distance, row.distance);
      }
      ++agg.feasible_runs;
      sum_d += row.distance;
      sum_m += static_cast<double>(row.missed_windows);
      sum_v += static_cast<double>(row.vehicles);
    }
    if (agg.feasible_runs > 0) {
      const auto k = static_cast<double>(agg.feasible_runs);
      agg.mean_distance = sum_d / k;
      agg.mean_missed_windows = sum_m / k;
      agg.mean_vehicles = sum_v / k;
    }
  }
  return out;
}

namespace {

constexpr const char* kRowHeader =
    "cr,seed,status,distance,vehicles,missed_windows,replications,infeasible_customer";
constexpr const char* kAggregateHeader =
    "cr,runs,feasible_runs,mean_distance,min_distance,max_distance,mean_missed_windows,mean_vehicles";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  if (!parse_number(s, v)) throw std::invalid_argument("malformed number '" + s + "' in table");
  return v;
}

std::size_t to_size(const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); }

template <class F>
void read_table(std::istream& in, const char* header, F&& row_fn) {
  std::string line;
  if (!std::getline(in, line) || line != header) throw std::invalid_argument("unexpected table header");
  while (std::getline(in, line)) {
    if (line.empty()) break;
    row_fn(split_csv(line));
  }
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kRowHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.cr) << ',' << r.seed << ',' << (r.feasible ? "ok" : "infeasible") << ',';
    if (r.feasible)
      out << format_number(r.distance) << ',' << r.vehicles << ',' << r.missed_windows << ','
          << r.replications << ',';
    else
      out << ",,,,";
    if (r.infeasible_customer) out << *r.infeasible_customer;
    out << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<SweepAggregate>& aggregates) {
  out << kAggregateHeader << '\n';
  for (const auto& a : aggregates) {
    out << format_number(a.cr) << ',' << a.runs << ',' << a.feasible_runs << ','
        << format_number(a.mean_distance) << ',' << format_number(a.min_distance) << ','
        << format_number(a.max_distance) << ',' << format_number(a.mean_missed_windows) << ','
        << format_number(a.mean_vehicles) << '\n';
  }
}

std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  read_table(in, kRowHeader, [&](const std::vector<std::string>& c) {
    if (c.size() != 8) throw std::invalid_argument("sweep row needs 8 cells");
    SweepRow r;
    r.cr = to_double(c[0]);
    r.seed = std::stoull(c[1]);
    r.feasible = c[2] == "ok";
    if (r.feasible) {
      r.distance = to_double(c[3]);
      r.vehicles = to_size(c[4]);
      r.missed_windows = to_size(c[5]);
      r.replications = to_size(c[6]);
    }
    if (!c[7].empty()) r.infeasible_customer = std::stoi(c[7]);
    rows.push_back(r);
  });
  return rows;
}

std::vector<SweepAggregate> parse_aggregate_csv(std::istream& in) {
  std::vector<SweepAggregate> out;
  read_table(in, kAggregateHeader, [&](const std::vector<std::string>& c) {
    if (c.size() != 8) throw std::invalid_argument("aggregate row needs 8 cells");
    out.push_back({to_double(c[0]), to_size(c[1]), to_size(c[2]), to_double(c[3]), to_double(c[4]),
                   to_double(c[5]), to_double(c[6]), to_double(c[7])});
  });
  return out;
}

json sweep_to_json(const std::string& instance_path, const AcsParams& params,
                   const std::vector<SweepRow>& rows, const std::vector<SweepAggregate>& aggregates) {
  json runs = json::array();
  for (const auto& r : rows) {
    json row{{"cr", r.cr}, {"seed", r.seed}, {"feasible", r.feasible}};
    if (r.feasible) {
      row["distance"] = r.distance;
      row["vehicles"] = r.vehicles;
      row["missed_windows"] = r.missed_windows;
      row["replications"] = r.replications;
    }
    if (r.infeasible_customer) row["infeasible_customer"] = *r.infeasible_customer;
    runs.push_back(row);
  }
  json agg = json::array();
  for (const auto& a : aggregates)
    agg.push_back(json{{"cr", a.cr},
                       {"runs", a.runs},
                       {"feasible_runs", a.feasible_runs},
                       {"mean_distance", a.mean_distance},
                       {"min_distance", a.min_distance},
                       {"max_distance", a.max_distance},
                       {"mean_missed_windows", a.mean_missed_windows},
                       {"mean_vehicles", a.mean_vehicles}});
  return json{{"format", kSweepReportFormat},
              {"config", {{"instance", instance_path}, {"params", params_to_json(params)}}},
              {"runs", runs},
              {"aggregate", agg}};
}

}  // namespace fvrptw
