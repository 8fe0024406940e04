#include "fvrptw/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fvrptw {

namespace {

std::string describe(const char* what, std::size_t i) {
  std::ostringstream os;
  os << what << " (node " << i << ")";
  return os.str();
}

}  // namespace

void Instance::validate() const {
  const std::size_t n = customers.size();
  if (n == 0) throw InstanceError("instance has no depot");
  if (!(vehicle_capacity > 0.0)) throw InstanceError("vehicle capacity must be positive");
  if (!(depot_close >= 0.0)) throw InstanceError("depot close time must be non-negative");
  if (distance.size() != n || travel.size() != n)
    throw InstanceError("matrix dimensions do not match node count");

  for (std::size_t i = 0; i < n; ++i) {
    const Customer& c = customers[i];
    if (c.id != static_cast<NodeId>(i)) throw InstanceError(describe("customer ids must be 0..n in order", i));
    if (!(c.demand >= 0.0)) throw InstanceError(describe("negative demand", i));
    if (!(c.service_time >= 0.0)) throw InstanceError(describe("negative service time", i));
    if (!(c.window_open <= c.window_close)) throw InstanceError(describe("window open after close", i));
    if (c.demand > vehicle_capacity) throw InstanceError(describe("demand exceeds vehicle capacity", i));
  }
  if (customers[0].demand != 0.0) throw InstanceError("depot demand must be zero");

  for (std::size_t i = 0; i < n; ++i) {
    if (distance(i, i) != 0.0) throw InstanceError(describe("distance diagonal must be zero", i));
    for (std::size_t j = 0; j < n; ++j) {
      if (!(distance(i, j) >= 0.0) || !std::isfinite(distance(i, j)))
        throw InstanceError(describe("distance must be finite and non-negative", i));
      const Tfn& t = travel(i, j);
      if (!t.valid() || !(t.a >= 0.0) || !std::isfinite(t.c))
        throw InstanceError(describe("fuzzy travel time must satisfy 0 <= a <= b <= c", i));
    }
  }
}

std::vector<NodeId> Route::sequence() const {
  std::vector<NodeId> seq;
  seq.reserve(stops.size());
  for (const auto& s : stops) seq.push_back(s.customer_id);
  return seq;
}

std::vector<StopSchedule> propagate_schedule(const Instance& instance,
                                             std::span<const NodeId> stop_sequence) {
  if (stop_sequence.empty()) throw std::invalid_argument("empty stop sequence");
  const auto n = static_cast<NodeId>(instance.node_count());
  std::vector<bool> seen(instance.node_count(), false);

  std::vector<StopSchedule> out;
  out.reserve(stop_sequence.size());
  NodeId prev = kDepot;
  Tfn departure = Tfn::crisp(0.0);
  for (NodeId j : stop_sequence) {
    if (j <= kDepot || j >= n)
      throw std::invalid_argument("invalid customer id " + std::to_string(j));
    if (seen[static_cast<std::size_t>(j)])
      throw std::invalid_argument("customer " + std::to_string(j) + " repeated in route");
    seen[static_cast<std::size_t>(j)] = true;

    const Customer& c = instance.node(j);
    StopSchedule s;
    s.customer_id = j;
    s.arrival = departure + instance.travel(static_cast<std::size_t>(prev), static_cast<std::size_t>(j));
    s.service_start = fuzzy_max_crisp(s.arrival, c.window_open);
    s.departure = s.service_start + Tfn::crisp(c.service_time);
    s.waiting_time = std::max(c.window_open - s.arrival.b, 0.0);
    s.window_credibility = window_credibility(s.service_start, c.window_close);
    out.push_back(s);

    departure = s.departure;
    prev = j;
  }
  return out;
}

double window_credibility(const Tfn& service_start, double close) {
  return credibility_le(service_start, close);
}

ChanceCheck check_chance_constraint(std::span<const StopSchedule> schedules, double cr_star) {
  for (std::size_t k = 0; k < schedules.size(); ++k) {
    if (schedules[k].window_credibility < cr_star) return {false, k};
  }
  return {};
}

bool check_capacity(std::span<const NodeId> stops, const Instance& instance) {
  double load = 0.0;
  for (NodeId j : stops) load += instance.node(j).demand;
  return load <= instance.vehicle_capacity;
}

double route_distance(const Instance& instance, std::span<const NodeId> stops) {
  if (stops.empty()) return 0.0;
  double d = 0.0;
  std::size_t prev = kDepot;
  for (NodeId j : stops) {
    d += instance.distance(prev, static_cast<std::size_t>(j));
    prev = static_cast<std::size_t>(j);
  }
  return d + instance.distance(prev, kDepot);
}

double modal_return_time(const Instance& instance, std::span<const StopSchedule> schedules) {
  if (schedules.empty()) return 0.0;
  const auto& last = schedules.back();
  return last.departure.b + instance.travel(static_cast<std::size_t>(last.customer_id), kDepot).b;
}

double arrival_for_window_check(const Tfn& arrival, WindowBasis basis) {
  return basis == WindowBasis::Modal ? arrival.b : arrival.a;
}

Route make_route(const Instance& instance, std::span<const NodeId> stops) {
  Route r;
  r.stops = propagate_schedule(instance, stops);
  for (NodeId j : stops) r.total_load += instance.node(j).demand;
  r.total_distance = route_distance(instance, stops);
  return r;
}

Solution make_solution(const Instance& instance, const std::vector<std::vector<NodeId>>& routes,
                       double cr_star) {
  Solution s;
  s.cr_star = cr_star;
  for (const auto& seq : routes) {
    s.routes.push_back(make_route(instance, seq));
    s.total_distance += s.routes.back().total_distance;
  }
  return s;
}

double objective(const Solution& solution) {
  double total = 0.0;
  for (const auto& r : solution.routes) total += r.total_distance;
  return total;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::MissingCustomer: return "missing_customer";
    case ViolationKind::DuplicateVisit: return "duplicate_visit";
    case ViolationKind::InvalidCustomer: return "invalid_customer";
    case ViolationKind::EmptyRoute: return "empty_route";
    case ViolationKind::Capacity: return "capacity";
    case ViolationKind::TimeWindow: return "time_window";
    case ViolationKind::ChanceConstraint: return "chance_constraint";
    case ViolationKind::DepotClose: return "depot_close";
    case ViolationKind::InconsistentTotals: return "inconsistent_totals";
  }
  return "unknown";
}

bool ValidationResult::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

namespace {

bool near(double x, double y) {
  return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace

ValidationResult validate_solution(const Solution& solution, const Instance& instance,
                                   double cr_star, WindowBasis basis) {
  ValidationResult result;
  auto add = [&](ViolationKind kind, NodeId id, std::optional<std::size_t> route, std::string msg) {
    result.violations.push_back({kind, id, route, std::move(msg)});
  };

  const std::size_t n = instance.node_count();
  std::vector<int> visits(n, 0);
  double total = 0.0;

  for (std::size_t r = 0; r < solution.routes.size(); ++r) {
    const Route& route = solution.routes[r];
    if (route.stops.empty()) {
      add(ViolationKind::EmptyRoute, kDepot, r, "route " + std::to_string(r) + " has no stops");
      continue;
    }

    std::vector<NodeId> seq;
    bool ids_ok = true;
    for (const auto& s : route.stops) {
      const NodeId j = s.customer_id;
      if (j <= kDepot || static_cast<std::size_t>(j) >= n) {
        add(ViolationKind::InvalidCustomer, j, r, "invalid customer id " + std::to_string(j));
        ids_ok = false;
        continue;
      }
      if (++visits[static_cast<std::size_t>(j)] == 2)
        add(ViolationKind::DuplicateVisit, j, r, "customer " + std::to_string(j) + " visited more than once");
      seq.push_back(j);
    }
    if (!ids_ok) continue;

    // Recompute rather than trusting the stored annotations.
    std::vector<NodeId> unique = seq;
    std::sort(unique.begin(), unique.end());
    if (std::adjacent_find(unique.begin(), unique.end()) != unique.end()) continue;

    const Route fresh = make_route(instance, seq);
    total += fresh.total_distance;

    if (fresh.total_load > instance.vehicle_capacity)
      add(ViolationKind::Capacity, kDepot, r,
          "route " + std::to_string(r) + " load " + std::to_string(fresh.total_load) +
              " exceeds capacity " + std::to_string(instance.vehicle_capacity));
    if (!near(fresh.total_load, route.total_load) || !near(fresh.total_distance, route.total_distance))
      add(ViolationKind::InconsistentTotals, kDepot, r,
          "route " + std::to_string(r) + " stored load/distance disagree with recomputation");

    for (const auto& s : fresh.stops) {
      const Customer& c = instance.node(s.customer_id);
      if (arrival_for_window_check(s.arrival, basis) > c.window_close)
        add(ViolationKind::TimeWindow, s.customer_id, r,
            "customer " + std::to_string(s.customer_id) + " arrives after window close");
      if (s.window_credibility < cr_star)
        add(ViolationKind::ChanceConstraint, s.customer_id, r,
            "customer " + std::to_string(s.customer_id) + " credibility " +
                std::to_string(s.window_credibility) + " below " + std::to_string(cr_star));
    }
    if (modal_return_time(instance, fresh.stops) > instance.depot_close)
      add(ViolationKind::DepotClose, kDepot, r,
          "route " + std::to_string(r) + " returns after depot close");
  }

  for (std::size_t j = 1; j < n; ++j) {
    if (visits[j] == 0)
      add(ViolationKind::MissingCustomer, static_cast<NodeId>(j), std::nullopt,
          "customer " + std::to_string(j) + " is not served");
  }
  if (!near(total, solution.total_distance) && !result.has(ViolationKind::DuplicateVisit) &&
      !result.has(ViolationKind::InvalidCustomer))
    add(ViolationKind::InconsistentTotals, kDepot, std::nullopt,
        "solution total distance disagrees with recomputation");
  return result;
}

bool route_feasible(const Instance& instance, std::span<const NodeId> stops, double cr_star,
                    WindowBasis basis) {
  if (stops.empty()) return true;
  if (!check_capacity(stops, instance)) return false;
  const auto sched = propagate_schedule(instance, stops);
  for (const auto& s : sched) {
    if (arrival_for_window_check(s.arrival, basis) > instance.node(s.customer_id).window_close)
      return false;
  }
  if (!check_chance_constraint(sched, cr_star).pass) return false;
  return modal_return_time(instance, sched) <= instance.depot_close;
}

}  // namespace fvrptw
