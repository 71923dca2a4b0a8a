#pragma once

#include "mta/types.hpp"

#include <functional>
#include <vector>

namespace mta {

struct SolverOutcome {
  Tiling tiling;
  bool converged = true;
  std::size_t iterations = 0;
};

// A tiling solver for a fixed tile count.
using Solver = std::function<SolverOutcome(const LikelihoodField&, std::size_t, const SolverParams&)>;

struct ModelSelection {
  Tiling tiling;              // cheapest tiling seen
  std::size_t requested = 0;  // tile count the cheapest tiling was requested with
  std::vector<double> costs;  // costs[T] for every evaluated T, starting at 0
  bool converged = true;      // false if any solver run reported non-convergence
};

// Runs the solver for T = 0, 1, 2, ... and stops at the first T whose cost is
// not strictly below the cost at T - 1, or after t_max.
ModelSelection select_tile_count(const Solver& solver, const LikelihoodField& field,
                                 std::size_t t_max, const SolverParams& params);

}  // namespace mta
