#include "fvrptw/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "fvrptw/fuzzy.hpp"

namespace fvrptw {

double sample_travel_time(const Tfn& tfn, Rng& rng) {
  if (tfn.a == tfn.c) return tfn.b;
  for (std::size_t attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
    const double x = rng.uniform(tfn.a, tfn.c);
    const double r = rng.uniform();
    if (r < membership(tfn, x)) return x;
  }
  throw std::runtime_error("rejection sampler exhausted its attempt budget for " + to_string(tfn));
}

namespace {

struct Replication {
  std::vector<double> arrival;  // indexed by node id
  std::vector<char> missed;
};

Replication replicate(const Solution& solution, const Instance& instance, Rng& rng) {
  Replication rep;
  rep.arrival.assign(instance.node_count(), 0.0);
  rep.missed.assign(instance.node_count(), 0);
  for (const auto& route : solution.routes) {
    std::size_t prev = kDepot;
    double departure = 0.0;
    for (const auto& stop : route.stops) {
      const auto j = static_cast<std::size_t>(stop.customer_id);
      const Customer& c = instance.customers[j];
      const double arrival = departure + sample_travel_time(instance.travel(prev, j), rng);
      rep.arrival[j] = arrival;
      rep.missed[j] = arrival > c.window_close;
      departure = std::max(arrival, c.window_open) + c.service_time;
      prev = j;
    }
  }
  return rep;
}

}  // namespace

SimulationReport simulate_plan(const Solution& solution, const Instance& instance,
                               std::size_t n_replications, std::uint64_t seed, unsigned threads) {
  if (n_replications == 0) throw std::invalid_argument("replication count must be at least 1");

  std::vector<Replication> reps(n_replications);
  auto run = [&](std::size_t r) {
    Rng rng(derive_seed(seed, {r}));
    reps[r] = replicate(solution, instance, rng);
  };
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), n_replications);
  if (workers <= 1) {
    for (std::size_t r = 0; r < n_replications; ++r) run(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t r; (r = next.fetch_add(1)) < n_replications;) run(r);
      });
  }

  // Reduction in replication order.
  SimulationReport report;
  report.replications = n_replications;
  report.mean_total_distance = objective(solution);
  const std::size_t n = instance.node_count();
  for (std::size_t j = 1; j < n; ++j) {
    CustomerMisses cm;
    cm.customer_id = static_cast<NodeId>(j);
    cm.window_close = instance.customers[j].window_close;
    double sum = 0.0;
    for (const auto& rep : reps) {
      sum += rep.arrival[j];
      cm.miss_count += static_cast<std::size_t>(rep.missed[j]);
    }
    cm.mean_actual_arrival = sum / static_cast<double>(n_replications);
    report.missed_window_total += cm.miss_count;
    report.per_customer.push_back(cm);
  }
  return report;
}

}  // namespace fvrptw
