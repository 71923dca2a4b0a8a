#include "mta/error.hpp"
#include "mta/scoring.hpp"
#include "mta/sumprod.hpp"
#include "mta/tiling.hpp"

#include <algorithm>
#include <vector>

namespace mta {

Tiling resolve_overlaps(const Tiling& raw, const LikelihoodField& field) {
  if (static_cast<Eigen::Index>(raw.n_rows) != field.rows() ||
      static_cast<Eigen::Index>(raw.n_cols) != field.cols()) {
    throw InvalidArgument("tiling and likelihood field dimensions differ");
  }
  Tiling tiling = raw;
  Eigen::MatrixXi count = coverage(tiling);
  const std::size_t tiles = tiling.tile_count();
  std::vector<std::uint8_t> touched(tiles, 0);
  for (std::size_t k = 0; k < tiles; ++k) {
    for (std::size_t i : tiling.tiles[k].row_indices()) {
      for (std::size_t j : tiling.tiles[k].col_indices()) {
        if (count(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 1) touched[k] = 1;
      }
    }
  }
  std::vector<std::size_t> claimers;

  // Removing rows and columns only lowers counts, so one row-major pass settles
  // every contested element.
  for (std::size_t i = 0; i < tiling.n_rows; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < tiling.n_cols; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      if (count(ii, jj) < 2) continue;

      claimers.clear();
      for (std::size_t k = 0; k < tiles; ++k) {
        if (tiling.tiles[k].rows[i] != 0 && tiling.tiles[k].cols[j] != 0) claimers.push_back(k);
      }
      std::size_t winner = claimers.front();
      double winner_sum = tile_ratio_sum(tiling.tiles[winner], field);
      for (std::size_t k : claimers) {
        const double s = tile_ratio_sum(tiling.tiles[k], field);
        if (s > winner_sum) {
          winner = k;
          winner_sum = s;
        }
      }
      for (std::size_t k : claimers) {
        if (k == winner) continue;
        Tile& tile = tiling.tiles[k];
        double row_loss = 0.0;
        for (std::size_t c = 0; c < tiling.n_cols; ++c) {
          if (tile.cols[c] != 0) row_loss += field.ratio(ii, static_cast<Eigen::Index>(c));
        }
        double col_loss = 0.0;
        for (std::size_t r = 0; r < tiling.n_rows; ++r) {
          if (tile.rows[r] != 0) col_loss += field.ratio(static_cast<Eigen::Index>(r), jj);
        }
        if (row_loss <= col_loss) {
          tile.rows[i] = 0;
          for (std::size_t c = 0; c < tiling.n_cols; ++c) {
            if (tile.cols[c] != 0) count(ii, static_cast<Eigen::Index>(c)) -= 1;
          }
        } else {
          tile.cols[j] = 0;
          for (std::size_t r = 0; r < tiling.n_rows; ++r) {
            if (tile.rows[r] != 0) count(static_cast<Eigen::Index>(r), jj) -= 1;
          }
        }
      }
    }
  }

  // Every contested tile must pay for itself, so the result never costs more
  // than dropping all contested tiles.
  const double code_length = tile_code_length(field);
  for (std::size_t k = 0; k < tiles; ++k) {
    if (touched[k] != 0 && tile_ratio_sum(tiling.tiles[k], field) < code_length) {
      std::fill(tiling.tiles[k].rows.begin(), tiling.tiles[k].rows.end(), 0);
      std::fill(tiling.tiles[k].cols.begin(), tiling.tiles[k].cols.end(), 0);
    }
  }
  return prune_empty(std::move(tiling));
}

}  // namespace mta
