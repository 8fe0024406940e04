#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fvrptw/simulate.hpp"
#include "test_support.hpp"

using namespace fvrptw;
using fvrptw::testing::build_instance;
using fvrptw::testing::line_instance;
using fvrptw::testing::open_customer;

namespace {

double triangular_cdf(const Tfn& t, double x) {
  if (x <= t.a) return 0.0;
  if (x >= t.c) return 1.0;
  if (x <= t.b) return (x - t.a) * (x - t.a) / ((t.c - t.a) * (t.b - t.a));
  return 1.0 - (t.c - x) * (t.c - x) / ((t.c - t.a) * (t.c - t.b));
}

double ks_statistic(std::vector<double> xs, const Tfn& t) {
  std::sort(xs.begin(), xs.end());
  const auto n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = triangular_cdf(t, xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace

TEST_CASE("sample_travel_time") {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) CHECK(sample_travel_time(Tfn::crisp(5.0), rng) == 5.0);

  const Tfn unit{0, 1, 2};
  std::vector<double> xs;
  double sum = 0.0;
  for (int k = 0; k < 100'000; ++k) {
    xs.push_back(sample_travel_time(unit, rng));
    REQUIRE(xs.back() >= 0.0);
    REQUIRE(xs.back() <= 2.0);
    sum += xs.back();
  }
  CHECK(std::abs(sum / 1e5 - 1.0) <= 0.02);
  // Asymptotic KS critical value at alpha = 0.01.
  CHECK(ks_statistic(xs, unit) < 1.628 / std::sqrt(1e5));

  const Tfn skew{2, 3, 9};
  xs.clear();
  for (int k = 0; k < 20'000; ++k) xs.push_back(sample_travel_time(skew, rng));
  CHECK(ks_statistic(xs, skew) < 1.628 / std::sqrt(2e4));
}

TEST_CASE("simulate_plan") {
  SUBCASE("crisp feasible plan never misses") {
    const Instance inst = line_instance({0, 10, 20}, {{0, 1, 0, 10, 5}, {0, 1, 0, 30, 5}});
    const Solution plan = make_solution(inst, {{1, 2}}, 1.0);
    const auto rep = simulate_plan(plan, inst, 200, 7);
    CHECK(rep.replications == 200);
    CHECK(rep.missed_window_total == 0);
    CHECK(rep.mean_total_distance == plan.total_distance);
    REQUIRE(rep.per_customer.size() == 2);
    CHECK(rep.per_customer[0].mean_actual_arrival == 10.0);
    CHECK(rep.per_customer[1].mean_actual_arrival == 25.0);
  }
  SUBCASE("window closing before the left support is always missed") {
    const Instance inst = build_instance({{0, 1, 0, 5, 0}}, 1000, 1e6,
                                         [](std::size_t, std::size_t) { return 20.0; },
                                         [](double d) { return Tfn{0.5 * d, d, 1.5 * d}; });
    const Solution plan = make_solution(inst, {{1}}, 0.0);
    const auto rep = simulate_plan(plan, inst, 300, 9);
    CHECK(rep.per_customer[0].miss_count == 300);
    CHECK(rep.missed_window_total == 300);
    CHECK(rep.per_customer[0].mean_actual_arrival == doctest::Approx(20.0).epsilon(0.02));
  }
  SUBCASE("deterministic and independent of thread count") {
    const Instance inst = build_instance({{0, 1, 0, 25, 3}, {0, 1, 0, 50, 3}}, 1000, 1e6,
                                         [](std::size_t, std::size_t) { return 20.0; },
                                         [](double d) { return Tfn{0.8 * d, d, 1.3 * d}; });
    const Solution plan = make_solution(inst, {{1, 2}}, 0.0);
    const auto a = simulate_plan(plan, inst, 500, 11);
    const auto b = simulate_plan(plan, inst, 500, 11, 4);
    CHECK(a.missed_window_total == b.missed_window_total);
    for (std::size_t k = 0; k < a.per_customer.size(); ++k) {
      CHECK(a.per_customer[k].miss_count == b.per_customer[k].miss_count);
      CHECK(a.per_customer[k].mean_actual_arrival == b.per_customer[k].mean_actual_arrival);
    }
    CHECK(a.missed_window_total > 0);
    CHECK_THROWS_AS(simulate_plan(plan, inst, 0, 1), std::invalid_argument);
  }
  SUBCASE("plans with dominating credibilities miss less") {
    // Serving 2 then 1 delays customer 1; serving them separately does not.
    const Instance inst = build_instance({{0, 1, 0, 24, 0}, {0, 1, 0, 1e6, 0}}, 1000, 1e6,
                                         [](std::size_t, std::size_t) { return 20.0; },
                                         [](double d) { return Tfn{0.5 * d, d, 1.5 * d}; });
    const Solution a = make_solution(inst, {{1}, {2}}, 0.0);
    const Solution b = make_solution(inst, {{2, 1}}, 0.0);
    REQUIRE(a.routes[0].stops[0].window_credibility >= b.routes[0].stops[1].window_credibility);
    std::size_t misses_a = 0, misses_b = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      misses_a += simulate_plan(a, inst, 1000, seed).missed_window_total;
      misses_b += simulate_plan(b, inst, 1000, seed).missed_window_total;
    }
    CHECK(misses_a <= misses_b);
    CHECK(misses_b > 0);
  }
}
