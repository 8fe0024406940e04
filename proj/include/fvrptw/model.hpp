#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvrptw/fuzzy.hpp"

namespace fvrptw {

using NodeId = int;
inline constexpr NodeId kDepot = 0;

// Dense row-major square matrix.
template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, const T& fill = T{}) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

struct Customer {
  NodeId id = 0;
  double demand = 0.0;
  double window_open = 0.0;
  double window_close = 0.0;
  double service_time = 0.0;

  friend bool operator==(const Customer&, const Customer&) = default;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  std::string name;
  std::vector<Customer> customers;  // customers[0] is the depot
  double vehicle_capacity = 0.0;
  double depot_close = 0.0;
  SquareMatrix<double> distance;
  SquareMatrix<Tfn> travel;

  std::size_t node_count() const { return customers.size(); }
  std::size_t customer_count() const { return customers.empty() ? 0 : customers.size() - 1; }
  const Customer& node(NodeId id) const { return customers[static_cast<std::size_t>(id)]; }

  // Throws InstanceError describing the first broken invariant.
  void validate() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Which component of the fuzzy arrival the crisp window-close check uses.
// Optimistic compares the left support bound, Modal the mode.
enum class WindowBasis { Optimistic, Modal };

struct StopSchedule {
  NodeId customer_id = 0;
  Tfn arrival;
  Tfn service_start;
  Tfn departure;
  double waiting_time = 0.0;
  double window_credibility = 0.0;
};

struct Route {
  std::vector<StopSchedule> stops;
  double total_load = 0.0;
  double total_distance = 0.0;

  std::vector<NodeId> sequence() const;
};

struct Solution {
  std::vector<Route> routes;
  double total_distance = 0.0;
  double cr_star = 0.0;

  std::size_t vehicle_count() const { return routes.size(); }
};

// Fuzzy schedule along depot -> seq[0] -> ... -> seq.back(). The depot
// departure is crisp zero. Throws std::invalid_argument on an unknown,
// depot or repeated id, or an empty sequence.
std::vector<StopSchedule> propagate_schedule(const Instance& instance,
                                             std::span<const NodeId> stop_sequence);

// Cr{TS <= close}.
double window_credibility(const Tfn& service_start, double close);

struct ChanceCheck {
  bool pass = true;
  std::optional<std::size_t> first_violation;  // index into the schedule
};

ChanceCheck check_chance_constraint(std::span<const StopSchedule> schedules, double cr_star);

bool check_capacity(std::span<const NodeId> stops, const Instance& instance);

double route_distance(const Instance& instance, std::span<const NodeId> stops);

// Modal time the vehicle is back at the depot after the last stop.
double modal_return_time(const Instance& instance, std::span<const StopSchedule> schedules);

double arrival_for_window_check(const Tfn& arrival, WindowBasis basis);

Route make_route(const Instance& instance, std::span<const NodeId> stops);
Solution make_solution(const Instance& instance, const std::vector<std::vector<NodeId>>& routes,
                       double cr_star);

double objective(const Solution& solution);

enum class ViolationKind {
  MissingCustomer,
  DuplicateVisit,
  InvalidCustomer,
  EmptyRoute,
  Capacity,
  TimeWindow,
  ChanceConstraint,
  DepotClose,
  InconsistentTotals,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  NodeId customer_id = kDepot;        // offending customer, or depot
  std::optional<std::size_t> route;   // route index when applicable
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool pass() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

// Full feasibility check of a plan: partition, capacity, time windows
// (on the selected basis), chance constraint, depot close time and the
// stored totals. All violations are reported.
ValidationResult validate_solution(const Solution& solution, const Instance& instance,
                                   double cr_star,
                                   WindowBasis basis = WindowBasis::Optimistic);

// Feasibility of a single route at cr_star, without the partition check.
bool route_feasible(const Instance& instance, std::span<const NodeId> stops, double cr_star,
                    WindowBasis basis);

}  // namespace fvrptw
