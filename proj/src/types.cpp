#include "mta/types.hpp"

#include "mta/error.hpp"

#include <algorithm>
#include <string>

namespace mta {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

std::size_t count_on(const Indicator& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](std::uint8_t b) { return b != 0; }));
}

std::vector<std::size_t> on_indices(const Indicator& v) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] != 0) out.push_back(k);
  }
  return out;
}

}  // namespace

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.cols() == 0) {
    throw InvalidArgument("data matrix must have positive dimensions");
  }
  if (!all_finite(values_)) throw InvalidArgument("data matrix contains non-finite values");
}

LikelihoodField::LikelihoodField(Matrix log_ratio, Matrix log_background)
    : log_ratio_(std::move(log_ratio)), log_background_(std::move(log_background)) {
  if (log_ratio_.rows() != log_background_.rows() || log_ratio_.cols() != log_background_.cols()) {
    throw InvalidArgument("log-ratio and background matrices differ in shape");
  }
  if (log_ratio_.rows() == 0 || log_ratio_.cols() == 0) {
    throw InvalidArgument("likelihood field must have positive dimensions");
  }
  if (!all_finite(log_ratio_) || !all_finite(log_background_)) {
    throw InvalidArgument("likelihood field contains non-finite values");
  }
}

LikelihoodField LikelihoodField::from_log_ratio(Matrix log_ratio) {
  Matrix background = Matrix::Zero(log_ratio.rows(), log_ratio.cols());
  return {std::move(log_ratio), std::move(background)};
}

Tile Tile::from_indices(std::size_t n_rows, std::size_t n_cols, const std::vector<std::size_t>& row_idx,
                        const std::vector<std::size_t>& col_idx) {
  Tile tile{Indicator(n_rows, 0), Indicator(n_cols, 0)};
  for (auto i : row_idx) {
    if (i >= n_rows) throw InvalidArgument("row index " + std::to_string(i) + " out of range");
    tile.rows[i] = 1;
  }
  for (auto j : col_idx) {
    if (j >= n_cols) throw InvalidArgument("column index " + std::to_string(j) + " out of range");
    tile.cols[j] = 1;
  }
  return tile;
}

std::size_t Tile::row_count() const { return count_on(rows); }
std::size_t Tile::col_count() const { return count_on(cols); }
std::vector<std::size_t> Tile::row_indices() const { return on_indices(rows); }
std::vector<std::size_t> Tile::col_indices() const { return on_indices(cols); }

Tiling Tiling::blank(std::size_t rows, std::size_t cols, std::size_t tile_count) {
  Tiling t(rows, cols);
  t.tiles.assign(tile_count, Tile{Indicator(rows, 0), Indicator(cols, 0)});
  return t;
}

void SolverParams::validate() const {
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  if (!(convergence_tol > 0.0)) throw InvalidArgument("convergence_tol must be positive");
  if (!(clamp_bound > 0.0)) throw InvalidArgument("clamp_bound must be positive");
  if (!(clamp_start > 0.0)) throw InvalidArgument("clamp_start must be positive");
  if (!(clamp_growth >= 1.0)) throw InvalidArgument("clamp_growth must be at least 1");
  if (!(freeze_belief > 0.0)) throw InvalidArgument("freeze_belief must be positive");
  if (!(decimate_margin >= 0.0)) throw InvalidArgument("decimate_margin must be non-negative");
  if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
  if (!(icm_init_density > 0.0 && icm_init_density < 1.0)) {
    throw InvalidArgument("icm_init_density must lie in (0, 1)");
  }
}

}  // namespace mta
