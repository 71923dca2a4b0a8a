#pragma once

#include "mta/types.hpp"

namespace mta {

// True iff no element is claimed by two tiles. Throws InvalidArgument when a
// tile's indicator lengths disagree with the tiling dimensions.
bool check_nonoverlap(const Tiling& tiling);

// Throws OverlapError unless check_nonoverlap holds.
void require_nonoverlap(const Tiling& tiling);

// Number of tiles claiming each element.
Eigen::MatrixXi coverage(const Tiling& tiling);

// Label t (1-based) where tile t covers the element, 0 elsewhere.
ElementLabels labels_from_tiling(const Tiling& tiling);

// Drops tiles without an active row or an active column. Order is preserved.
Tiling prune_empty(Tiling tiling);

// Sum of log-ratios over the elements of one tile.
double tile_ratio_sum(const Tile& tile, const LikelihoodField& field);

}  // namespace mta
