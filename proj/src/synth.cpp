#include "mta/synth.hpp"

#include "mta/error.hpp"
#include "mta/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace mta {

namespace {

enum class Stream : std::uint32_t { tiling = 1, noise = 2 };

std::mt19937_64 engine(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

std::vector<std::size_t> sample_subset(const std::vector<std::size_t>& pool, std::size_t count,
                                       std::mt19937_64& rng) {
  std::vector<std::size_t> picked;
  picked.reserve(count);
  std::sample(pool.begin(), pool.end(), std::back_inserter(picked), static_cast<std::ptrdiff_t>(count), rng);
  return picked;
}

}  // namespace

double sigma_from_log_variance(double log_variance) { return std::sqrt(std::pow(10.0, log_variance)); }

Tiling generate_tiling(std::size_t n, std::size_t tile_count, double area_fraction, std::uint64_t seed) {
  if (n < 4) throw InvalidArgument("matrix size must be at least 4");
  if (!(area_fraction > 0.0)) throw InvalidArgument("area fraction must be positive");
  if (static_cast<double>(tile_count) * area_fraction > 0.5) {
    throw InvalidArgument("tile count times area fraction exceeds 0.5");
  }
  std::mt19937_64 rng = engine(seed, Stream::tiling);
  const double target = area_fraction * static_cast<double>(n * n);
  std::uniform_real_distribution<double> area_draw(0.75 * target, 1.25 * target);
  std::uniform_real_distribution<double> aspect_draw(1.0 / 3.0, 3.0);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});

  Tiling tiling(n, n);
  for (std::size_t t = 0; t < tile_count; ++t) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
      const double area = area_draw(rng);
      const double aspect = aspect_draw(rng);
      const auto r = static_cast<std::size_t>(std::lround(std::sqrt(area * aspect)));
      const auto c = static_cast<std::size_t>(std::lround(std::sqrt(area / aspect)));
      if (r < 1 || c < 1 || r > n || c > n) continue;
      const auto rc = static_cast<double>(r * c);
      const double ratio = static_cast<double>(r) / static_cast<double>(c);
      if (rc < 0.75 * target || rc > 1.25 * target || ratio < 1.0 / 3.0 || ratio > 3.0) continue;

      // Rows are visited in random order; a row joins only if the columns left
      // free on every joined row still number at least c.
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<std::uint8_t> blocked(n, 0);
      std::vector<std::uint8_t> trial(n, 0);
      std::vector<std::size_t> rows;
      std::size_t free_count = n;
      for (std::size_t i : all) {
        if (rows.size() == r) break;
        trial = blocked;
        for (const Tile& prior : tiling.tiles) {
          if (prior.rows[i] == 0) continue;
          for (std::size_t j = 0; j < n; ++j) trial[j] |= prior.cols[j];
        }
        const auto trial_free = static_cast<std::size_t>(std::count(trial.begin(), trial.end(), std::uint8_t{0}));
        if (trial_free < c) continue;
        blocked.swap(trial);
        free_count = trial_free;
        rows.push_back(i);
      }
      if (rows.size() < r) continue;
      std::vector<std::size_t> free_cols;
      free_cols.reserve(free_count);
      for (std::size_t j = 0; j < n; ++j) {
        if (blocked[j] == 0) free_cols.push_back(j);
      }
      tiling.tiles.push_back(Tile::from_indices(n, n, rows, sample_subset(free_cols, c, rng)));
      placed = true;
    }
    if (!placed) {
      throw GenerationError("could not place tile " + std::to_string(t + 1) + " of " + std::to_string(tile_count) +
                            " after " + std::to_string(kMaxPlacementAttempts) + " attempts");
    }
  }
  return tiling;
}

DataMatrix render_matrix(const Tiling& tiling, double tile_value, double bg_value) {
  require_nonoverlap(tiling);
  Matrix values = Matrix::Constant(static_cast<Eigen::Index>(tiling.n_rows), static_cast<Eigen::Index>(tiling.n_cols), bg_value);
  for (const Tile& tile : tiling.tiles) {
    for (std::size_t i : tile.row_indices()) {
      for (std::size_t j : tile.col_indices()) values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = tile_value;
    }
  }
  return DataMatrix(std::move(values));
}

DataMatrix add_gaussian_noise(const DataMatrix& clean, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be finite and non-negative");
  Matrix values = clean.values();
  if (sigma == 0.0) return DataMatrix(std::move(values));
  std::mt19937_64 rng = engine(seed, Stream::noise);
  std::normal_distribution<double> noise(0.0, sigma);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) values(i, j) += noise(rng);
  }
  return DataMatrix(std::move(values));
}

GroundTruth make_ground_truth(std::size_t n, std::size_t tile_count, double log_variance, std::uint64_t seed,
                              double area_fraction) {
  Tiling tiling = generate_tiling(n, tile_count, area_fraction, seed);
  DataMatrix clean = render_matrix(tiling);
  const double sigma = sigma_from_log_variance(log_variance);
  DataMatrix noisy = add_gaussian_noise(clean, sigma, seed);
  return GroundTruth{std::move(tiling), std::move(clean), std::move(noisy), sigma, seed};
}

}  // namespace mta
