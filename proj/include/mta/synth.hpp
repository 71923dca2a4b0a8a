#pragma once

#include "mta/types.hpp"

#include <cstdint>

namespace mta {

inline constexpr double kDefaultAreaFraction = 0.04;
inline constexpr std::size_t kMaxPlacementAttempts = 1000;

struct GroundTruth {
  Tiling tiling;
  DataMatrix clean;
  DataMatrix noisy;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// sigma such that log10(sigma^2) = log_variance.
double sigma_from_log_variance(double log_variance);

// Random non-overlapping tiles on an n x n matrix, each of area within 25% of
// area_fraction * n^2 and rows:cols aspect in [1/3, 3].
Tiling generate_tiling(std::size_t n, std::size_t tile_count, double area_fraction, std::uint64_t seed);

DataMatrix render_matrix(const Tiling& tiling, double tile_value = 1.0, double bg_value = 0.0);

DataMatrix add_gaussian_noise(const DataMatrix& clean, double sigma, std::uint64_t seed);

// Tiling, rendering and noise with seeds derived from `seed`.
GroundTruth make_ground_truth(std::size_t n, std::size_t tile_count, double log_variance,
                              std::uint64_t seed, double area_fraction = kDefaultAreaFraction);

}  // namespace mta
