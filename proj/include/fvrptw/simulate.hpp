#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fvrptw/model.hpp"
#include "fvrptw/rng.hpp"

namespace fvrptw {

inline constexpr std::size_t kMaxRejectionAttempts = 1'000'000;

// Rejection sampler for the triangular membership: x ~ U[a, c], accepted
// when a fresh uniform r satisfies r < membership(x). Degenerate numbers
// return b without consuming randomness.
double sample_travel_time(const Tfn& tfn, Rng& rng);

struct CustomerMisses {
  NodeId customer_id = 0;
  std::size_t miss_count = 0;
  double mean_actual_arrival = 0.0;
  double window_close = 0.0;
};

struct SimulationReport {
  std::size_t replications = 0;
  double mean_total_distance = 0.0;
  std::vector<CustomerMisses> per_customer;  // one entry per customer 1..n
  std::size_t missed_window_total = 0;
};

// Replays the plan n_replications times with sampled travel times.
// Vehicles wait for a window to open, serve late customers anyway and
// record a miss when the realized arrival exceeds the window close.
// Replication r draws from the substream derive_seed(seed, {r}), so the
// report does not depend on `threads`.
SimulationReport simulate_plan(const Solution& solution, const Instance& instance,
                               std::size_t n_replications, std::uint64_t seed,
                               unsigned threads = 1);

}  // namespace fvrptw
