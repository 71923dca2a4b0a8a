#pragma once

#include "mta/types.hpp"

namespace mta {

// Binary data with symmetric flip noise epsilon. Tile elements are noisy ones,
// background elements are noisy zeros.
LikelihoodField binary_likelihood_field(const DataMatrix& data, double epsilon);

// Gaussian evidence with a shared standard deviation for tile and background.
LikelihoodField gaussian_likelihood_field(const DataMatrix& data, double tile_mean, double bg_mean,
                                          double sigma);

}  // namespace mta
