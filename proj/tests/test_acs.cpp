#include <doctest.h>

#include <cmath>
#include <map>

#include "brute_force.hpp"
#include "fvrptw/acs.hpp"
#include "fvrptw/generate.hpp"
#include "fvrptw/instance_io.hpp"
#include "test_support.hpp"

using namespace fvrptw;
using fvrptw::testing::build_instance;
using fvrptw::testing::line_instance;
using fvrptw::testing::open_customer;

namespace {

AcsParams quick(int iterations = 50, double cr = 0.8) {
  AcsParams p;
  p.n_iterations = iterations;
  p.cr_star = cr;
  return p;
}

}  // namespace

TEST_CASE("init_pheromone") {
  const Instance inst = build_instance({open_customer(), open_customer()}, 1000, 1e6,
                                       [](std::size_t i, std::size_t j) {
                                         const double d[3][3] = {{0, 4, 1}, {4, 0, 2}, {1, 2, 0}};
                                         return d[i][j];
                                       });
  const PheromoneMatrix tau = init_pheromone(inst);
  CHECK(tau(0, 1) == 0.25);
  CHECK(tau(0, 2) == 1.0);
  CHECK(tau(1, 2) == 0.5);
  CHECK(tau(2, 1) == 0.5);

  const PheromoneMatrix flat = init_pheromone(inst, PheromoneInit::Constant, 1.0);
  CHECK(flat(0, 1) == 1.0);
  CHECK(flat(1, 2) == 1.0);

  Instance zero = inst;
  zero.distance(1, 2) = zero.distance(2, 1) = 0.0;
  const PheromoneMatrix z = init_pheromone(zero);
  CHECK(z(1, 2) == 1.0);  // 1 / smallest positive distance (1)
  CHECK(std::isfinite(z(2, 1)));
}

TEST_CASE("visibility") {
  AcsParams p;
  p.gamma = 0.5;
  p.delta = 1.0;
  // c = 10, modal arrival 10, window opens at 15: wait 5, width 100.
  const Instance inst = build_instance({{0, 1, 15, 115, 0}}, 1000, 1e6,
                                       [](std::size_t, std::size_t) { return 10.0; });
  const double expected = 1.0 / (std::sqrt(15.0) + 100.0);
  CHECK(visibility(inst, 0, 1, p, 0.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(visibility(inst, 0, 1, p, 0.0) == doctest::Approx(0.009627).epsilon(1e-4));

  p.gamma = 1.0;
  const Instance tight = build_instance({{0, 1, 50, 50, 0}}, 1000, 1e6,
                                        [](std::size_t, std::size_t) { return 1.0; });
  CHECK(visibility(tight, 0, 1, p, 49.0) == 1.0);  // 1 / (1 + 0)

  const Instance wide = build_instance({{0, 1, 50, 60, 0}}, 1000, 1e6,
                                       [](std::size_t, std::size_t) { return 1.0; });
  CHECK(visibility(wide, 0, 1, p, 49.0) < visibility(tight, 0, 1, p, 49.0));

  const Instance degenerate = build_instance({{0, 1, 0, 0, 0}}, 1000, 1e6,
                                             [](std::size_t, std::size_t) { return 0.0; });
  CHECK(visibility(degenerate, 0, 1, p, 0.0) == kVisibilityCap);

  p.urgency = UrgencyTerm::Slack;  // l - a = 60 - 50
  CHECK(visibility(wide, 0, 1, p, 49.0) == doctest::Approx(1.0 / 11.0));
}

TEST_CASE("candidate_set") {
  // Travel (d - 10, d, d + 10) with d = 20 from the depot.
  auto fuzz = [](double d) { return Tfn{std::max(0.0, d - 10.0), d, d + 10.0}; };
  const Instance inst = build_instance(
      {
          {0, 100, 0, 1000, 0},  // 1: fine
          {0, 100, 0, 22, 0},    // 2: Cr{(10,20,30) <= 22} = 0.6 < 0.8
          {0, 950, 0, 1000, 0},  // 3: fits alone, not after load 100
      },
      1000, 5000, [](std::size_t, std::size_t) { return 20.0; }, fuzz);
  AcsParams p = quick();

  RouteState state = RouteState::fresh(inst);
  CHECK(candidate_set(inst, state, p) == std::vector<NodeId>{1, 3});
  state.load = 100.0;
  // Hand-evaluated: 1 passes every predicate, 2 fails credibility, 3 fails capacity.
  CHECK(window_credibility({10, 20, 30}, 22.0) == doctest::Approx(0.6));
  CHECK(candidate_set(inst, state, p) == std::vector<NodeId>{1});

  p.cr_star = 0.6;
  CHECK(candidate_set(inst, state, p) == std::vector<NodeId>{1, 2});

  RouteState done = RouteState::fresh(inst);
  done.visited = {false, true, true, true};
  CHECK(candidate_set(inst, done, p).empty());

  const Instance heavy = line_instance({0, 1}, {open_customer(600)});
  RouteState loaded = RouteState::fresh(heavy);
  loaded.load = 500.0;
  CHECK(candidate_set(heavy, loaded, p).empty());

  Instance closing = inst;
  closing.depot_close = 30.0;  // modal return 20 + 0 + 20
  CHECK(candidate_set(closing, RouteState::fresh(closing), p).empty());
}

TEST_CASE("property: raising cr_star never enlarges the candidate set") {
  GeneratorConfig g;
  g.customers = 12;
  g.horizon = Horizon::Short;
  const Instance inst = generate_instance(g, 21);
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    RouteState s = RouteState::fresh(inst);
    const auto steps = static_cast<int>(rng.uniform(0.0, 4.0));
    AcsParams loose = quick(1, 0.0);
    for (int k = 0; k < steps; ++k) {
      const auto c = candidate_set(inst, s, loose);
      if (c.empty()) break;
      s.advance(inst, c[static_cast<std::size_t>(rng.uniform(0.0, static_cast<double>(c.size()) - 1e-9))]);
    }
    std::vector<NodeId> prev = candidate_set(inst, s, quick(1, 0.0));
    for (double cr = 0.1; cr <= 1.0; cr += 0.1) {
      const auto cur = candidate_set(inst, s, quick(1, cr));
      REQUIRE(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
      prev = cur;
    }
  }
}

TEST_CASE("select_next") {
  const Instance inst = line_instance({0, 1, 2}, {open_customer(), open_customer()});
  PheromoneMatrix tau(3, 1.0);
  tau(0, 1) = 3.0;
  tau(0, 2) = 1.0;
  AcsParams p;
  p.alpha = 1.0;
  p.beta = 0.0;  // score = tau
  const RouteState s = RouteState::fresh(inst);

  SUBCASE("single candidate") {
    Rng rng(1);
    CHECK(select_from(tau, inst, s, {2}, p, rng) == 2);
    CHECK_FALSE(select_from(tau, inst, s, {}, p, rng).has_value());
  }
  SUBCASE("greedy when q0 = 1") {
    p.q0 = 1.0;
    tau(0, 1) = 2.0;
    Rng rng(2);
    for (int k = 0; k < 100; ++k) CHECK(select_next(tau, inst, s, p, rng) == 1);
    tau(0, 1) = 1.0;  // tie: lowest id
    for (int k = 0; k < 100; ++k) CHECK(select_next(tau, inst, s, p, rng) == 1);
  }
  SUBCASE("roulette when q0 = 0 matches the proportional rule") {
    p.q0 = 0.0;
    Rng rng(3);
    int first = 0;
    const int draws = 100'000;
    for (int k = 0; k < draws; ++k) first += select_next(tau, inst, s, p, rng) == 1;
    CHECK(std::abs(first / static_cast<double>(draws) - 0.75) <= 0.01);
  }
}

TEST_CASE("construct_solution") {
  SUBCASE("single customer") {
    const Instance inst = line_instance({0, 5}, {open_customer()});
    Rng rng(1);
    const Solution s = construct_solution(inst, init_pheromone(inst), quick(), rng);
    REQUIRE(s.routes.size() == 1);
    CHECK(s.routes[0].sequence() == std::vector<NodeId>{1});
    CHECK(s.total_distance == 10.0);
  }
  SUBCASE("unroutable customer") {
    // Customer 2 closes before it can be reached even with zero delay.
    const Instance inst = line_instance({0, 5, 50}, {open_customer(), {0, 1, 0, 10, 0}});
    Rng rng(1);
    try {
      construct_solution(inst, init_pheromone(inst), quick(), rng);
      FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
      CHECK(e.customer() == 2);
    }
    CHECK(find_unroutable(inst, quick()) == 2);
    CHECK_THROWS_AS(solve(inst, quick()), InfeasibleError);
  }
  SUBCASE("bundled instance") {
    const Instance inst = load_instance(FVRPTW_DATA_DIR "/short_horizon_18.fvrp");
    Rng rng(42);
    const AcsParams p = quick();
    const Solution s = construct_solution(inst, init_pheromone(inst), p, rng);
    CHECK(validate_solution(s, inst, p.cr_star).pass());
  }
}

TEST_CASE("local_search") {
  SUBCASE("untangles a crossing on a line") {
    const Instance inst = line_instance({0, 1, 2, 3, 4}, {open_customer(), open_customer(), open_customer(), open_customer()});
    const Solution in = make_solution(inst, {{1, 3, 2, 4}}, 0.8);
    const Solution out = local_search(in, inst, quick());
    CHECK(out.total_distance == 8.0);
    CHECK(in.total_distance == 10.0);
    // Brute force over all 2-opt neighbours of the result: none improves.
    const auto seq = out.routes[0].sequence();
    for (std::size_t i = 0; i < seq.size(); ++i)
      for (std::size_t j = i + 1; j < seq.size(); ++j) {
        auto t = seq;
        std::reverse(t.begin() + static_cast<long>(i), t.begin() + static_cast<long>(j) + 1);
        CHECK(route_distance(inst, t) >= out.total_distance);
      }
    CHECK(validate_solution(out, inst, 0.8).pass());
  }
  SUBCASE("fixed point") {
    const Instance inst = line_instance({0, 1, 2, 3}, {open_customer(), open_customer(), open_customer()});
    const Solution in = make_solution(inst, {{1, 2, 3}}, 0.8);
    const Solution out = local_search(in, inst, quick());
    CHECK(out.routes[0].sequence() == in.routes[0].sequence());
  }
  SUBCASE("rejects improvements that break the chance constraint") {
    // Route 2,1,3 (length 8) has improving neighbours 1,2,3 and 2,3,1
    // (length 6); the first delays customer 2, the second customer 1.
    const Instance inst =
        line_instance({0, 1, 2, 3}, {{0, 1, 0, 13, 10}, {0, 1, 0, 2, 10}, {0, 1, 0, 1e6, 10}});
    const Solution in = make_solution(inst, {{2, 1, 3}}, 0.8);
    REQUIRE(validate_solution(in, inst, 0.8).pass());
    REQUIRE(route_distance(inst, std::vector<NodeId>{1, 2, 3}) < in.total_distance);
    REQUIRE_FALSE(route_feasible(inst, std::vector<NodeId>{1, 2, 3}, 0.8, WindowBasis::Optimistic));
    const Solution out = local_search(in, inst, quick());
    CHECK(out.routes[0].sequence() == std::vector<NodeId>{2, 1, 3});
    CHECK(out.total_distance == in.total_distance);
  }
}

TEST_CASE("global_pheromone_update") {
  const Instance inst = line_instance({0, 50, 10}, {open_customer(), open_customer()});
  AcsParams p;
  p.rho = 0.2;
  p.deposit_q = 1.0;
  PheromoneMatrix tau = init_pheromone(inst, PheromoneInit::Constant, 1.0);
  const Solution best = make_solution(inst, {{1}}, 0.8);
  REQUIRE(best.total_distance == 100.0);
  global_pheromone_update(tau, best, p);
  CHECK(tau(0, 1) == doctest::Approx(0.81));
  CHECK(tau(1, 0) == doctest::Approx(0.81));
  CHECK(tau(0, 2) == doctest::Approx(0.8));
  CHECK(tau(1, 2) == doctest::Approx(0.8));

  PheromoneMatrix ev = init_pheromone(inst, PheromoneInit::Constant, 1.0);
  global_pheromone_update(ev, Solution{}, p);
  global_pheromone_update(ev, Solution{}, p);
  CHECK(ev(1, 2) == doctest::Approx(0.64));

  for (int k = 0; k < 10'000; ++k) global_pheromone_update(ev, Solution{}, p);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) CHECK(ev(i, j) > 0.0);
}

TEST_CASE("solve") {
  SUBCASE("single customer") {
    const Instance inst = line_instance({0, 7}, {open_customer()});
    const auto r = solve(inst, quick(5));
    CHECK(r.best.total_distance == 14.0);
  }
  SUBCASE("deterministic, monotone trace, serial equals parallel") {
    const Instance inst = load_instance(FVRPTW_DATA_DIR "/short_horizon_18.fvrp");
    AcsParams p = quick(60);
    const auto a = solve(inst, p);
    const auto b = solve(inst, p);
    p.threads = 4;
    const auto c = solve(inst, p);
    CHECK(a.trace == b.trace);
    CHECK(a.trace == c.trace);
    CHECK(a.best.routes.size() == c.best.routes.size());
    for (std::size_t r = 0; r < a.best.routes.size(); ++r)
      CHECK(a.best.routes[r].sequence() == c.best.routes[r].sequence());
    for (std::size_t k = 1; k < a.trace.size(); ++k) CHECK(a.trace[k] <= a.trace[k - 1]);
    CHECK(validate_solution(a.best, inst, p.cr_star).pass());
  }
  SUBCASE("matches the exhaustive optimum on a small crisp instance") {
    GeneratorConfig g;
    g.customers = 6;
    g.crisp = true;
    g.demand_min = g.demand_max = 100.0;
    g.capacity = 400.0;
    const Instance inst = generate_instance(g, 5);
    const auto oracle = fvrptw::testing::brute_force_optimum(inst);
    const auto r = solve(inst, quick(200));
    CHECK(r.best.total_distance == doctest::Approx(oracle.distance).epsilon(1e-9));
  }
}

TEST_CASE("params validation") {
  AcsParams p;
  CHECK_NOTHROW(p.validate());
  p.rho = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.q0 = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.n_ants = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.cr_star = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
