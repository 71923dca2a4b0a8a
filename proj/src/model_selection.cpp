#include "mta/model_selection.hpp"

#include "mta/error.hpp"
#include "mta/scoring.hpp"
#include "mta/tiling.hpp"

namespace mta {

ModelSelection select_tile_count(const Solver& solver, const LikelihoodField& field, std::size_t t_max,
                                 const SolverParams& params) {
  if (t_max == 0) throw InvalidArgument("t_max must be at least 1");
  params.validate();

  ModelSelection result;
  result.tiling = Tiling(static_cast<std::size_t>(field.rows()), static_cast<std::size_t>(field.cols()));
  double best = mdl_cost(result.tiling, field);
  double previous = best;
  result.costs.push_back(best);

  for (std::size_t t = 1; t <= t_max; ++t) {
    SolverOutcome outcome = solver(field, t, params);
    result.converged = result.converged && outcome.converged;
    Tiling tiling = prune_empty(std::move(outcome.tiling));
    const double cost = mdl_cost(tiling, field);
    result.costs.push_back(cost);
    if (cost < best) {
      best = cost;
      result.tiling = std::move(tiling);
      result.requested = t;
    }
    if (!(cost < previous)) break;
    previous = cost;
  }
  return result;
}

}  // namespace mta
