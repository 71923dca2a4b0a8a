#include "mta/tiling.hpp"

#include "mta/error.hpp"

#include <string>

namespace mta {

namespace {

void check_dimensions(const Tiling& tiling) {
  for (std::size_t t = 0; t < tiling.tiles.size(); ++t) {
    const Tile& tile = tiling.tiles[t];
    if (tile.rows.size() != tiling.n_rows || tile.cols.size() != tiling.n_cols) {
      throw InvalidArgument("tile " + std::to_string(t + 1) + " has indicators of size " +
                            std::to_string(tile.rows.size()) + "x" + std::to_string(tile.cols.size()) +
                            ", expected " + std::to_string(tiling.n_rows) + "x" +
                            std::to_string(tiling.n_cols));
    }
  }
}

bool intersects(const Indicator& a, const Indicator& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != 0 && b[k] != 0) return true;
  }
  return false;
}

}  // namespace

bool check_nonoverlap(const Tiling& tiling) {
  check_dimensions(tiling);
  const auto& tiles = tiling.tiles;
  for (std::size_t u = 0; u < tiles.size(); ++u) {
    for (std::size_t v = u + 1; v < tiles.size(); ++v) {
      if (intersects(tiles[u].rows, tiles[v].rows) && intersects(tiles[u].cols, tiles[v].cols)) return false;
    }
  }
  return true;
}

void require_nonoverlap(const Tiling& tiling) {
  if (!check_nonoverlap(tiling)) throw OverlapError("tiling assigns an element to more than one tile");
}

Eigen::MatrixXi coverage(const Tiling& tiling) {
  check_dimensions(tiling);
  Eigen::MatrixXi count = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(tiling.n_rows),
                                                static_cast<Eigen::Index>(tiling.n_cols));
  for (const Tile& tile : tiling.tiles) {
    const auto rows = tile.row_indices();
    for (auto j : tile.col_indices()) {
      for (auto i : rows) count(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += 1;
    }
  }
  return count;
}

ElementLabels labels_from_tiling(const Tiling& tiling) {
  require_nonoverlap(tiling);
  ElementLabels labels = ElementLabels::Zero(static_cast<Eigen::Index>(tiling.n_rows),
                                             static_cast<Eigen::Index>(tiling.n_cols));
  for (std::size_t t = 0; t < tiling.tiles.size(); ++t) {
    const auto rows = tiling.tiles[t].row_indices();
    for (auto j : tiling.tiles[t].col_indices()) {
      for (auto i : rows) {
        labels(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<int>(t + 1);
      }
    }
  }
  return labels;
}

Tiling prune_empty(Tiling tiling) {
  std::erase_if(tiling.tiles, [](const Tile& tile) { return tile.empty(); });
  return tiling;
}

double tile_ratio_sum(const Tile& tile, const LikelihoodField& field) {
  double sum = 0.0;
  const auto rows = tile.row_indices();
  for (auto j : tile.col_indices()) {
    for (auto i : rows) sum += field.ratio(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return sum;
}

}  // namespace mta
