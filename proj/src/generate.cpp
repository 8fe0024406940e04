#include "fvrptw/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "fvrptw/instance_io.hpp"
#include "fvrptw/numfmt.hpp"
#include "fvrptw/rng.hpp"

namespace fvrptw {

PlanarInstance generate_planar(const GeneratorConfig& cfg, std::uint64_t seed) {
  if (cfg.customers == 0) throw std::invalid_argument("generator needs at least one customer");
  if (cfg.demand_max > cfg.capacity) throw std::invalid_argument("demand range exceeds capacity");
  if (!(cfg.fuzzy_lo <= 1.0 && 1.0 <= cfg.fuzzy_hi && cfg.fuzzy_lo >= 0.0))
    throw std::invalid_argument("fuzzy factors must satisfy 0 <= lo <= 1 <= hi");

  Rng rng(seed);
  const std::size_t n = cfg.customers + 1;
  std::vector<double> x(n), y(n);
  x[0] = y[0] = cfg.area / 2.0;

  Instance inst;
  inst.name = "generated";
  inst.vehicle_capacity = cfg.capacity;
  inst.depot_close = cfg.depot_close;
  inst.customers.resize(n);
  inst.customers[0] = {0, 0.0, 0.0, cfg.depot_close, 0.0};
  for (std::size_t i = 1; i < n; ++i) {
    x[i] = std::round(rng.uniform(0.0, cfg.area));
    y[i] = std::round(rng.uniform(0.0, cfg.area));
    const double demand = std::round(rng.uniform(cfg.demand_min, cfg.demand_max) / 5.0) * 5.0;
    inst.customers[i] = {static_cast<NodeId>(i), demand, 0.0, cfg.depot_close, cfg.service_time};
  }

  inst.distance = SquareMatrix<double>(n, 0.0);
  inst.travel = SquareMatrix<Tfn>(n, Tfn{});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::hypot(x[i] - x[j], y[i] - y[j]);
      inst.distance(i, j) = d;
      inst.travel(i, j) = cfg.crisp ? Tfn::crisp(d) : Tfn{cfg.fuzzy_lo * d, d, cfg.fuzzy_hi * d};
    }

  if (cfg.horizon == Horizon::Short) {
    // Sweep the customers by polar angle into capacity-feasible reference
    // routes and open each window shortly before the reference arrival,
    // so that the reference plan stays modally on time.
    std::vector<std::size_t> order(n - 1);
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
      return std::atan2(y[p] - y[0], x[p] - x[0]) < std::atan2(y[q] - y[0], x[q] - x[0]);
    });
    double load = 0.0, time = 0.0;
    std::size_t prev = 0;
    for (std::size_t j : order) {
      Customer& c = inst.customers[j];
      if (load + c.demand > cfg.capacity) {
        load = 0.0;
        time = 0.0;
        prev = 0;
      }
      const double arrival = time + inst.distance(prev, j);
      c.window_open = std::round(std::max(0.0, arrival - rng.uniform(0.0, cfg.max_early_offset)));
      c.window_close = c.window_open + cfg.window_width;
      time = std::max(arrival, c.window_open) + c.service_time;
      load += c.demand;
      prev = j;
    }
  }
  PlanarInstance out{std::move(inst), {}};
  for (std::size_t i = 0; i < n; ++i) out.points.push_back({x[i], y[i]});
  return out;
}

void write_planar_instance(std::ostream& out, const PlanarInstance& planar, double fuzzy_lo,
                           double fuzzy_hi) {
  const Instance& inst = planar.instance;
  out << kInstanceFormatTag << ' ' << kInstanceFormatVersion << '\n';
  if (!inst.name.empty()) out << "name " << inst.name << '\n';
  out << "capacity " << format_number(inst.vehicle_capacity) << '\n';
  out << "depot_close " << format_number(inst.depot_close) << '\n';
  out << "travel coordinates " << format_number(fuzzy_lo) << ' ' << format_number(fuzzy_hi) << '\n';
  out << "# node id demand open close service x y\n";
  for (const auto& c : inst.customers) {
    const Point& p = planar.points[static_cast<std::size_t>(c.id)];
    out << "node " << c.id << ' ' << format_number(c.demand) << ' ' << format_number(c.window_open)
        << ' ' << format_number(c.window_close) << ' ' << format_number(c.service_time) << ' '
        << format_number(p.x) << ' ' << format_number(p.y) << '\n';
  }
}

}  // namespace fvrptw
