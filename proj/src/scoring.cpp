#include "mta/scoring.hpp"

#include "mta/error.hpp"
#include "mta/tiling.hpp"

#include <cmath>
#include <numbers>

namespace mta {

namespace {

void check_field(const Tiling& tiling, const LikelihoodField& field) {
  if (static_cast<Eigen::Index>(tiling.n_rows) != field.rows() ||
      static_cast<Eigen::Index>(tiling.n_cols) != field.cols()) {
    throw InvalidArgument("tiling and likelihood field dimensions differ");
  }
  require_nonoverlap(tiling);
}

double covered_evidence(const Tiling& tiling, const LikelihoodField& field) {
  double sum = 0.0;
  for (const Tile& tile : tiling.tiles) sum += tile_ratio_sum(tile, field);
  return sum;
}

}  // namespace

double tile_code_length(const LikelihoodField& field) {
  return static_cast<double>(field.rows() + field.cols()) * std::numbers::ln2;
}

double log_joint_score(const Tiling& tiling, const LikelihoodField& field) {
  check_field(tiling, field);
  return covered_evidence(tiling, field) + field.log_background().sum();
}

double mdl_cost(const Tiling& tiling, const LikelihoodField& field) {
  check_field(tiling, field);
  std::size_t used = 0;
  for (const Tile& tile : tiling.tiles) used += tile.empty() ? 0 : 1;
  return -covered_evidence(tiling, field) - field.log_background().sum() +
         static_cast<double>(used) * tile_code_length(field);
}

}  // namespace mta
