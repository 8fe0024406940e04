#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvrptw/model.hpp"
#include "fvrptw/rng.hpp"

namespace fvrptw {

enum class PheromoneInit { Reciprocal, Constant };

// Second term of the visibility denominator: the window width (l - e),
// or the remaining slack (l - a) at the modal arrival.
enum class UrgencyTerm { WindowWidth, Slack };

struct AcsParams {
  double alpha = 2.5;
  double beta = 0.7;
  double gamma = 0.5;
  double delta = 1.0;
  double rho = 0.2;
  double q0 = 0.5;
  int n_ants = 11;
  int n_iterations = 1000;
  double deposit_q = 1.0;
  double cr_star = 0.8;
  std::uint64_t rng_seed = 42;
  PheromoneInit pheromone_init = PheromoneInit::Reciprocal;
  double initial_pheromone = 1.0;  // used by PheromoneInit::Constant
  UrgencyTerm urgency = UrgencyTerm::WindowWidth;
  WindowBasis window_basis = WindowBasis::Optimistic;
  unsigned threads = 1;  // ant constructions per iteration run on this many workers

  // Throws std::invalid_argument on an out-of-range field.
  void validate() const;
};

std::string to_string(PheromoneInit v);
std::string to_string(UrgencyTerm v);
std::string to_string(WindowBasis v);

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(NodeId customer, const std::string& what)
      : std::runtime_error(what), customer_(customer) {}
  NodeId customer() const { return customer_; }

 private:
  NodeId customer_;
};

class PheromoneMatrix {
 public:
  // Floor keeping every entry strictly positive under repeated evaporation.
  static constexpr double kMinTau = 1e-300;

  PheromoneMatrix() = default;
  explicit PheromoneMatrix(std::size_t n, double fill = 1.0) : tau_(n, fill) {}

  std::size_t size() const { return tau_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return tau_(i, j); }
  double& operator()(std::size_t i, std::size_t j) { return tau_(i, j); }

  friend bool operator==(const PheromoneMatrix&, const PheromoneMatrix&) = default;

 private:
  SquareMatrix<double> tau_;
};

// tau_ij = 1 / c_ij. Zero-distance off-diagonal arcs use the smallest
// positive distance in place of c_ij.
PheromoneMatrix init_pheromone(const Instance& instance,
                               PheromoneInit mode = PheromoneInit::Reciprocal,
                               double constant = 1.0);

inline constexpr double kVisibilityCap = 1e6;

// eta_ij = 1 / ((c_ij + wt_j)^gamma + (l_j - e_j)^delta), where wt_j is
// the wait implied by departing i at modal time `departure_time`.
double visibility(const Instance& instance, NodeId i, NodeId j, const AcsParams& params,
                  double departure_time);

// Vehicle under construction.
struct RouteState {
  NodeId current = kDepot;
  Tfn departure = Tfn::crisp(0.0);
  double load = 0.0;
  std::vector<bool> visited;  // indexed by node id; depot entry unused

  static RouteState fresh(const Instance& instance);
  void open_vehicle();
  // Appends j to the route, updating time, load and visited flags.
  void advance(const Instance& instance, NodeId j);
};

// Customers that can be appended to the current route without breaking
// capacity, the window-close check, the chance constraint or the depot
// close time. Returned in increasing id order.
std::vector<NodeId> candidate_set(const Instance& instance, const RouteState& state,
                                  const AcsParams& params);

// Pseudo-random proportional rule over candidate_set.
std::optional<NodeId> select_next(const PheromoneMatrix& pheromone, const Instance& instance,
                                  const RouteState& state, const AcsParams& params, Rng& rng);

// Same rule over a precomputed candidate list.
std::optional<NodeId> select_from(const PheromoneMatrix& pheromone, const Instance& instance,
                                  const RouteState& state, const std::vector<NodeId>& candidates,
                                  const AcsParams& params, Rng& rng);

// First customer (lowest id) that cannot be served alone by an empty
// vehicle at params.cr_star.
std::optional<NodeId> find_unroutable(const Instance& instance, const AcsParams& params);

// One ant. Throws InfeasibleError if some customer cannot be routed.
Solution construct_solution(const Instance& instance, const PheromoneMatrix& pheromone,
                            const AcsParams& params, Rng& rng);

// Intra-route 2-opt to a local optimum, accepting only strictly
// improving moves that keep the route feasible.
Solution local_search(const Solution& solution, const Instance& instance, const AcsParams& params);

// Evaporate every arc, then deposit deposit_q / L on each arc of `best`.
void global_pheromone_update(PheromoneMatrix& pheromone, const Solution& best,
                             const AcsParams& params);

struct SolveResult {
  Solution best;
  std::vector<double> trace;  // best-so-far distance after each iteration
  std::size_t best_iteration = 0;
};

SolveResult solve(const Instance& instance, const AcsParams& params);

}  // namespace fvrptw
