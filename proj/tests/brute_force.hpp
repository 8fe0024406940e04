#pragma once

// Exhaustive optimum for small crisp instances. Independent of the
// solver: it uses its own arrival recursion and never calls into the
// model's schedule or feasibility code.

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "fvrptw/model.hpp"

namespace fvrptw::testing {

struct BruteForceResult {
  double distance = std::numeric_limits<double>::infinity();
  std::vector<std::vector<NodeId>> routes;
};

// Feasible iff load fits, every crisp arrival is within its window close
// and the vehicle is back by depot_close. Assumes degenerate travel times.
inline bool crisp_route_ok(const Instance& inst, const std::vector<NodeId>& r, double& dist) {
  double load = 0.0, t = 0.0;
  std::size_t prev = 0;
  dist = 0.0;
  for (NodeId id : r) {
    const auto j = static_cast<std::size_t>(id);
    const auto& c = inst.customers[j];
    load += c.demand;
    t += inst.travel(prev, j).b;
    if (t > c.window_close) return false;
    t = std::max(t, c.window_open) + c.service_time;
    dist += inst.distance(prev, j);
    prev = j;
  }
  dist += inst.distance(prev, 0);
  t += inst.travel(prev, 0).b;
  return load <= inst.vehicle_capacity && t <= inst.depot_close;
}

// Every permutation of the customers, cut into consecutive routes in
// every possible way.
inline BruteForceResult brute_force_optimum(const Instance& inst) {
  const std::size_t n = inst.customer_count();
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  BruteForceResult best;
  do {
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
      std::vector<std::vector<NodeId>> routes(1);
      for (std::size_t k = 0; k < n; ++k) {
        routes.back().push_back(perm[k]);
        if (k + 1 < n && (mask >> k) & 1u) routes.emplace_back();
      }
      double total = 0.0;
      bool ok = true;
      for (const auto& r : routes) {
        double d = 0.0;
        if (!crisp_route_ok(inst, r, d)) {
          ok = false;
          break;
        }
        total += d;
        if (total >= best.distance) {
          ok = false;
          break;
        }
      }
      if (ok) {
        best.distance = total;
        best.routes = routes;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace fvrptw::testing
