#include "mta/pca.hpp"

#include "mta/error.hpp"
#include "mta/sumprod.hpp"
#include "mta/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mta {

Matrix column_covariance(const DataMatrix& data) {
  const Eigen::Index m = data.cols();
  if (m < 2) throw InvalidArgument("covariance needs at least two columns");
  const Matrix& x = data.values();
  const Matrix centered = x.colwise() - x.rowwise().mean();
  return (centered * centered.transpose()) / static_cast<double>(m - 1);
}

Components top_components(const Matrix& cov, std::size_t count) {
  if (cov.rows() != cov.cols()) throw InvalidArgument("covariance must be square");
  const auto n = static_cast<std::size_t>(cov.rows());
  if (count > n) {
    throw InvalidArgument("requested " + std::to_string(count) + " components of a " + std::to_string(n) +
                          "-dimensional covariance");
  }
  Components out;
  if (count == 0) return out;

  const Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  if (solver.info() != Eigen::Success) throw InvalidArgument("eigendecomposition failed");
  const Vector& values = solver.eigenvalues();

  // Stable descending order keeps the lowest eigenvector index first among equal values.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });

  for (std::size_t k = 0; k < count; ++k) {
    Vector v = solver.eigenvectors().col(order[k]).normalized();
    Eigen::Index peak = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
      if (std::abs(v(i)) > std::abs(v(peak))) peak = i;
    }
    if (v(peak) < 0.0) v = -v;
    out.values.push_back(values(order[k]));
    out.vectors.push_back(std::move(v));
  }
  return out;
}

Indicator gap_threshold(const std::vector<double>& values) {
  if (values.size() < 2) throw InvalidArgument("gap threshold needs at least two values");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double widest = 0.0;
  double cut = 0.0;
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    const double gap = sorted[k] - sorted[k - 1];
    if (gap > widest) {
      widest = gap;
      cut = sorted[k - 1] + 0.5 * gap;
    }
  }
  Indicator flags(values.size(), 0);
  if (widest <= 0.0) return flags;
  for (std::size_t k = 0; k < values.size(); ++k) flags[k] = values[k] > cut ? 1 : 0;
  return flags;
}

Tiling run_pca_tiles(const DataMatrix& data, std::size_t tile_count, const LikelihoodField& field) {
  const auto n = static_cast<std::size_t>(data.rows());
  const auto m = static_cast<std::size_t>(data.cols());
  if (field.rows() != data.rows() || field.cols() != data.cols()) {
    throw InvalidArgument("data and likelihood field dimensions differ");
  }
  if (tile_count > std::min(n, m)) throw InvalidArgument("tile count exceeds matrix dimensions");
  Tiling raw(n, m);
  if (tile_count == 0) return raw;

  const Components comps = top_components(column_covariance(data), tile_count);
  std::vector<Indicator> row_sets;
  for (const Vector& v : comps.vectors) {
    Indicator flags = gap_threshold(std::vector<double>(v.data(), v.data() + v.size()));
    if (std::any_of(flags.begin(), flags.end(), [](std::uint8_t f) { return f != 0; })) {
      row_sets.push_back(std::move(flags));
    }
  }
  if (row_sets.empty()) return raw;

  Matrix basis = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(row_sets.size()));
  for (std::size_t k = 0; k < row_sets.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row_sets[k][i];
  }
  const Matrix coefficients = basis.completeOrthogonalDecomposition().pseudoInverse() * data.values();

  for (std::size_t k = 0; k < row_sets.size(); ++k) {
    const Vector projection = coefficients.row(static_cast<Eigen::Index>(k)).transpose();
    Tile tile{row_sets[k], gap_threshold(std::vector<double>(projection.data(), projection.data() + projection.size()))};
    raw.tiles.push_back(std::move(tile));
  }
  return resolve_overlaps(raw, field);
}

Solver pca_solver(DataMatrix data) {
  return [data = std::move(data)](const LikelihoodField& field, std::size_t tiles, const SolverParams&) {
    const std::size_t usable = std::min<std::size_t>(tiles, static_cast<std::size_t>(std::min(data.rows(), data.cols())));
    return SolverOutcome{run_pca_tiles(data, usable, field), true, 0};
  };
}

}  // namespace mta
