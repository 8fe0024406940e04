#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fvrptw/model.hpp"

namespace fvrptw {

enum class Horizon { Long, Short };

// Random planar instance. Distances are Euclidean and fuzzy travel times
// are (fuzzy_lo * d, d, fuzzy_hi * d).
struct GeneratorConfig {
  std::size_t customers = 18;
  double capacity = 1000.0;
  double service_time = 15.0;
  double depot_close = 5000.0;
  double area = 100.0;             // coordinates in [0, area]^2, depot at the centre
  double demand_min = 50.0;
  double demand_max = 250.0;
  Horizon horizon = Horizon::Long;
  double window_width = 100.0;     // short horizon only
  double max_early_offset = 60.0;  // short horizon: reference arrival minus window open
  double fuzzy_lo = 0.8;
  double fuzzy_hi = 1.3;
  bool crisp = false;              // degenerate travel times
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct PlanarInstance {
  Instance instance;
  std::vector<Point> points;  // indexed by node id
};

PlanarInstance generate_planar(const GeneratorConfig& config, std::uint64_t seed);

inline Instance generate_instance(const GeneratorConfig& config, std::uint64_t seed) {
  return generate_planar(config, seed).instance;
}

// Coordinate form of an instance file; reloading it reproduces
// `planar.instance` exactly when its travel times were derived from the
// points with the same factors.
void write_planar_instance(std::ostream& out, const PlanarInstance& planar, double fuzzy_lo,
                           double fuzzy_hi);

}  // namespace fvrptw
