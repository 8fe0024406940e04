#include "fvrptw/acs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace fvrptw {

void AcsParams::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
  if (!(rho > 0.0 && rho < 1.0)) fail("rho must lie in (0, 1)");
  if (!(q0 >= 0.0 && q0 <= 1.0)) fail("q0 must lie in [0, 1]");
  if (!(cr_star >= 0.0 && cr_star <= 1.0)) fail("cr_star must lie in [0, 1]");
  if (n_ants < 1) fail("ant count must be at least 1");
  if (n_iterations < 1) fail("iteration count must be at least 1");
  for (double e : {alpha, beta, gamma, delta})
    if (!std::isfinite(e)) fail("exponents must be finite");
  if (!(deposit_q > 0.0) || !std::isfinite(deposit_q)) fail("deposit constant must be positive");
  if (!(initial_pheromone > 0.0)) fail("initial pheromone must be positive");
  if (threads < 1) fail("thread count must be at least 1");
}

std::string to_string(PheromoneInit v) {
  return v == PheromoneInit::Reciprocal ? "reciprocal" : "constant";
}
std::string to_string(UrgencyTerm v) { return v == UrgencyTerm::WindowWidth ? "width" : "slack"; }
std::string to_string(WindowBasis v) { return v == WindowBasis::Optimistic ? "optimistic" : "modal"; }

PheromoneMatrix init_pheromone(const Instance& instance, PheromoneInit mode, double constant) {
  const std::size_t n = instance.node_count();
  PheromoneMatrix tau(n, 1.0);
  if (mode == PheromoneInit::Constant) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) tau(i, j) = constant;
    return tau;
  }
  double eps = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && instance.distance(i, j) > 0.0) eps = std::min(eps, instance.distance(i, j));
  if (!std::isfinite(eps)) eps = 1.0;  // every arc has zero length

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double c = instance.distance(i, j);
      tau(i, j) = 1.0 / (c > 0.0 ? c : eps);
    }
  return tau;
}

double visibility(const Instance& instance, NodeId i, NodeId j, const AcsParams& params,
                  double departure_time) {
  const auto ui = static_cast<std::size_t>(i);
  const auto uj = static_cast<std::size_t>(j);
  const Customer& cj = instance.node(j);
  const double arrival = departure_time + instance.travel(ui, uj).b;
  const double wait = std::max(cj.window_open - arrival, 0.0);
  const double urgency = params.urgency == UrgencyTerm::WindowWidth
                             ? cj.window_close - cj.window_open
                             : std::max(cj.window_close - arrival, 0.0);
  const double denom =
      std::pow(instance.distance(ui, uj) + wait, params.gamma) + std::pow(urgency, params.delta);
  if (!(denom > 1.0 / kVisibilityCap)) return kVisibilityCap;
  return 1.0 / denom;
}

RouteState RouteState::fresh(const Instance& instance) {
  RouteState s;
  s.visited.assign(instance.node_count(), false);
  return s;
}

void RouteState::open_vehicle() {
  current = kDepot;
  departure = Tfn::crisp(0.0);
  load = 0.0;
}

void RouteState::advance(const Instance& instance, NodeId j) {
  const Customer& c = instance.node(j);
  const Tfn arrival =
      departure + instance.travel(static_cast<std::size_t>(current), static_cast<std::size_t>(j));
  departure = fuzzy_max_crisp(arrival, c.window_open) + Tfn::crisp(c.service_time);
  load += c.demand;
  visited[static_cast<std::size_t>(j)] = true;
  current = j;
}

namespace {

bool can_append(const Instance& instance, const RouteState& state, NodeId j,
                const AcsParams& params) {
  const auto uj = static_cast<std::size_t>(j);
  const Customer& c = instance.node(j);
  if (state.load + c.demand > instance.vehicle_capacity) return false;

  const Tfn arrival = state.departure + instance.travel(static_cast<std::size_t>(state.current), uj);
  if (arrival_for_window_check(arrival, params.window_basis) > c.window_close) return false;

  const Tfn start = fuzzy_max_crisp(arrival, c.window_open);
  if (window_credibility(start, c.window_close) < params.cr_star) return false;

  const double back = start.b + c.service_time + instance.travel(uj, kDepot).b;
  return back <= instance.depot_close;
}

}  // namespace

std::vector<NodeId> candidate_set(const Instance& instance, const RouteState& state,
                                  const AcsParams& params) {
  std::vector<NodeId> out;
  for (std::size_t j = 1; j < instance.node_count(); ++j) {
    if (state.visited[j]) continue;
    if (can_append(instance, state, static_cast<NodeId>(j), params)) out.push_back(static_cast<NodeId>(j));
  }
  return out;
}

std::optional<NodeId> select_from(const PheromoneMatrix& pheromone, const Instance& instance,
                                  const RouteState& state, const std::vector<NodeId>& candidates,
                                  const AcsParams& params, Rng& rng) {
  if (candidates.empty()) return std::nullopt;
  if (candidates.size() == 1) return candidates.front();

  // Scores tau^alpha * eta^beta are handled in log space so that tiny
  // pheromone levels do not underflow the roulette total.
  const auto i = static_cast<std::size_t>(state.current);
  std::vector<double> log_score(candidates.size());
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const NodeId j = candidates[k];
    const double eta = visibility(instance, state.current, j, params, state.departure.b);
    log_score[k] = params.alpha * std::log(pheromone(i, static_cast<std::size_t>(j))) +
                   params.beta * std::log(eta);
    if (log_score[k] > best) {
      best = log_score[k];
      arg = k;
    }
  }

  if (rng.uniform() <= params.q0) return candidates[arg];

  std::vector<double> weight(candidates.size());
  double total = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    weight[k] = std::exp(log_score[k] - best);
    total += weight[k];
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    acc += weight[k];
    if (u < acc) return candidates[k];
  }
  return candidates.back();
}

std::optional<NodeId> select_next(const PheromoneMatrix& pheromone, const Instance& instance,
                                  const RouteState& state, const AcsParams& params, Rng& rng) {
  return select_from(pheromone, instance, state, candidate_set(instance, state, params), params, rng);
}

std::optional<NodeId> find_unroutable(const Instance& instance, const AcsParams& params) {
  const RouteState empty = RouteState::fresh(instance);
  for (std::size_t j = 1; j < instance.node_count(); ++j) {
    if (!can_append(instance, empty, static_cast<NodeId>(j), params)) return static_cast<NodeId>(j);
  }
  return std::nullopt;
}

Solution construct_solution(const Instance& instance, const PheromoneMatrix& pheromone,
                            const AcsParams& params, Rng& rng) {
  RouteState state = RouteState::fresh(instance);
  std::size_t remaining = instance.customer_count();
  std::vector<std::vector<NodeId>> routes;

  while (remaining > 0) {
    state.open_vehicle();
    std::vector<NodeId> seq;
    for (;;) {
      const auto next = select_next(pheromone, instance, state, params, rng);
      if (!next) break;
      state.advance(instance, *next);
      seq.push_back(*next);
      --remaining;
    }
    if (seq.empty()) {
      NodeId stuck = kDepot;
      for (std::size_t j = 1; j < instance.node_count(); ++j)
        if (!state.visited[j]) {
          stuck = static_cast<NodeId>(j);
          break;
        }
      throw InfeasibleError(stuck, "customer " + std::to_string(stuck) +
                                       " cannot be served by an empty vehicle at Cr* = " +
                                       std::to_string(params.cr_star));
    }
    routes.push_back(std::move(seq));
  }
  return make_solution(instance, routes, params.cr_star);
}

namespace {

// Best-improvement 2-opt on one route; returns true if the route changed.
bool improve_route(const Instance& instance, std::vector<NodeId>& seq, const AcsParams& params) {
  bool changed = false;
  double current = route_distance(instance, seq);
  for (;;) {
    double best = current;
    std::size_t bi = 0, bj = 0;
    std::vector<NodeId> trial;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      for (std::size_t j = i + 1; j < seq.size(); ++j) {
        trial = seq;
        std::reverse(trial.begin() + static_cast<std::ptrdiff_t>(i),
                     trial.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        const double d = route_distance(instance, trial);
        if (d < best - 1e-9 * std::max(1.0, best) &&
            route_feasible(instance, trial, params.cr_star, params.window_basis)) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (best == current) return changed;
    std::reverse(seq.begin() + static_cast<std::ptrdiff_t>(bi),
                 seq.begin() + static_cast<std::ptrdiff_t>(bj) + 1);
    current = best;
    changed = true;
  }
}

}  // namespace

Solution local_search(const Solution& solution, const Instance& instance, const AcsParams& params) {
  std::vector<std::vector<NodeId>> routes;
  bool changed = false;
  for (const auto& r : solution.routes) {
    routes.push_back(r.sequence());
    changed |= improve_route(instance, routes.back(), params);
  }
  if (!changed) return solution;
  return make_solution(instance, routes, solution.cr_star);
}

void global_pheromone_update(PheromoneMatrix& pheromone, const Solution& best,
                             const AcsParams& params) {
  const std::size_t n = pheromone.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      pheromone(i, j) = std::max((1.0 - params.rho) * pheromone(i, j), PheromoneMatrix::kMinTau);
    }

  const double length = best.total_distance;
  const double deposit = length > 0.0 ? params.deposit_q / length : params.deposit_q;
  for (const auto& r : best.routes) {
    std::size_t prev = kDepot;
    for (const auto& s : r.stops) {
      pheromone(prev, static_cast<std::size_t>(s.customer_id)) += deposit;
      prev = static_cast<std::size_t>(s.customer_id);
    }
    pheromone(prev, kDepot) += deposit;
  }
}

namespace {

std::vector<Solution> run_ants(const Instance& instance, const PheromoneMatrix& pheromone,
                               const AcsParams& params, std::size_t iteration) {
  const auto n_ants = static_cast<std::size_t>(params.n_ants);
  std::vector<Solution> ants(n_ants);
  auto build = [&](std::size_t k) {
    Rng rng(derive_seed(params.rng_seed, {iteration, k}));
    ants[k] = construct_solution(instance, pheromone, params, rng);
  };

  const std::size_t workers = std::min<std::size_t>(params.threads, n_ants);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n_ants; ++k) build(k);
    return ants;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n_ants);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < n_ants;) {
          try {
            build(k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return ants;
}

}  // namespace

SolveResult solve(const Instance& instance, const AcsParams& params) {
  params.validate();
  if (instance.customer_count() == 0) throw std::invalid_argument("instance has no customers");
  if (const auto stuck = find_unroutable(instance, params))
    throw InfeasibleError(*stuck, "customer " + std::to_string(*stuck) +
                                      " cannot be served by an empty vehicle at Cr* = " +
                                      std::to_string(params.cr_star));

  PheromoneMatrix pheromone = init_pheromone(instance, params.pheromone_init, params.initial_pheromone);
  SolveResult result;
  bool have_best = false;
  result.trace.reserve(static_cast<std::size_t>(params.n_iterations));

  for (std::size_t it = 0; it < static_cast<std::size_t>(params.n_iterations); ++it) {
    std::vector<Solution> ants = run_ants(instance, pheromone, params, it);
    std::size_t arg = 0;
    for (std::size_t k = 1; k < ants.size(); ++k)
      if (ants[k].total_distance < ants[arg].total_distance) arg = k;

    Solution improved = local_search(ants[arg], instance, params);
    if (!have_best || improved.total_distance < result.best.total_distance) {
      result.best = std::move(improved);
      result.best_iteration = it;
      have_best = true;
    }
    const auto check = validate_solution(result.best, instance, params.cr_star, params.window_basis);
    if (!check.pass())
      throw std::logic_error("solver produced an invalid solution: " + check.violations.front().message);

    global_pheromone_update(pheromone, result.best, params);
    result.trace.push_back(result.best.total_distance);
  }
  return result;
}

}  // namespace fvrptw
