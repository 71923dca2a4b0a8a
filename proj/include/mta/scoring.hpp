#pragma once

#include "mta/types.hpp"

namespace mta {

// log P(X | R, C, T) with the uniform P(T) and the configuration normaliser
// dropped: sum of covered log-ratios plus the full background term.
double log_joint_score(const Tiling& tiling, const LikelihoodField& field);

// Description length of a tiling: negative covered evidence, background code
// length and (N + M) log 2 for every non-empty tile.
double mdl_cost(const Tiling& tiling, const LikelihoodField& field);

// Cost of the indicator vectors of one tile, (N + M) log 2.
double tile_code_length(const LikelihoodField& field);

}  // namespace mta
