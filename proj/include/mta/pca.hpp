#pragma once

#include "mta/model_selection.hpp"
#include "mta/types.hpp"

#include <vector>

namespace mta {

// Sample covariance of the rows, treating columns as observations (divisor M - 1).
Matrix column_covariance(const DataMatrix& data);

struct Components {
  std::vector<double> values;   // non-increasing eigenvalues
  std::vector<Vector> vectors;  // unit length, largest-magnitude entry positive
};

Components top_components(const Matrix& cov, std::size_t count);

// Splits the values at the midpoint of the widest gap between consecutive
// sorted values; flags the upper group. All-equal input flags nothing.
Indicator gap_threshold(const std::vector<double>& values);

Tiling run_pca_tiles(const DataMatrix& data, std::size_t tile_count, const LikelihoodField& field);

// The baseline needs the raw data, so the solver captures it.
Solver pca_solver(DataMatrix data);

}  // namespace mta
