#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mta {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Integer matrix mapping each element to a tile index (1..T) or background (0).
using ElementLabels = Eigen::MatrixXi;

// Binary membership vector; one byte per index.
using Indicator = std::vector<std::uint8_t>;

/// Dense matrix of raw observations. Non-empty with all entries finite.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values);

  [[nodiscard]] Eigen::Index rows() const { return values_.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return values_.cols(); }
  [[nodiscard]] const Matrix& values() const { return values_; }
  [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

 private:
  Matrix values_;
};

/// Per-element evidence: log(l_ij / l0_ij) and the background log-likelihood log(l0_ij).
///
/// This pair is the only input the tiling solvers see. Both matrices share
/// dimensions and hold finite values.
class LikelihoodField {
 public:
  LikelihoodField(Matrix log_ratio, Matrix log_background);

  // Field with a zero background term; handy when only the ratios matter.
  static LikelihoodField from_log_ratio(Matrix log_ratio);

  [[nodiscard]] Eigen::Index rows() const { return log_ratio_.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return log_ratio_.cols(); }
  [[nodiscard]] const Matrix& log_ratio() const { return log_ratio_; }
  [[nodiscard]] const Matrix& log_background() const { return log_background_; }
  [[nodiscard]] double ratio(Eigen::Index i, Eigen::Index j) const { return log_ratio_(i, j); }

 private:
  Matrix log_ratio_;
  Matrix log_background_;
};

/// One tile: row and column membership indicators.
struct Tile {
  Indicator rows;
  Indicator cols;

  // Builds a tile from 0-based index lists.
  static Tile from_indices(std::size_t n_rows, std::size_t n_cols,
                           const std::vector<std::size_t>& row_idx,
                           const std::vector<std::size_t>& col_idx);

  [[nodiscard]] std::size_t row_count() const;
  [[nodiscard]] std::size_t col_count() const;
  [[nodiscard]] bool empty() const { return row_count() == 0 || col_count() == 0; }
  [[nodiscard]] std::vector<std::size_t> row_indices() const;
  [[nodiscard]] std::vector<std::size_t> col_indices() const;

  friend bool operator==(const Tile&, const Tile&) = default;
};

/// A set of tiles over an n_rows x n_cols matrix.
///
/// The struct itself does not enforce the non-overlap or non-empty invariants;
/// solvers use it for intermediate (raw) indicator states too. Every tiling a
/// solver returns has passed check_nonoverlap and prune_empty.
struct Tiling {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<Tile> tiles;

  Tiling() = default;
  Tiling(std::size_t rows, std::size_t cols) : n_rows(rows), n_cols(cols) {}
  // T tiles with every indicator cleared.
  static Tiling blank(std::size_t rows, std::size_t cols, std::size_t tile_count);

  [[nodiscard]] std::size_t tile_count() const { return tiles.size(); }

  friend bool operator==(const Tiling&, const Tiling&) = default;
};

enum class IcmInit {
  seeded,     // one positive-evidence seed element per tile (default)
  bernoulli,  // every indicator on with probability 0.3, then overlap repair
};

struct SolverParams {
  std::size_t max_iterations = 200;
  double convergence_tol = 1e-3;
  double decode_threshold = 0.0;
  double clamp_bound = 50.0;
  std::size_t restarts = 5;
  std::uint64_t rng_seed = 0;

  // Sum-product message hardening. The clip bound applied to every message
  // starts at clamp_start and grows by clamp_growth per sweep up to clamp_bound.
  double clamp_start = 0.2;
  double clamp_growth = 1.05;
  // From sweep freeze_after on, variables with |belief| > freeze_belief are frozen.
  std::size_t freeze_after = 10;
  double freeze_belief = 25.0;
  // After convergence, freeze every free variable with |belief| >= decimate_margin
  // (or else the most confident one) and continue until all are frozen.
  bool decimate = true;
  double decimate_margin = 5.0;

  IcmInit icm_init = IcmInit::seeded;
  double icm_init_density = 0.3;

  void validate() const;
};

}  // namespace mta
