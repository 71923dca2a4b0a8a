#pragma once

#include "mta/model_selection.hpp"
#include "mta/types.hpp"

#include <vector>

namespace mta {

enum class Axis { row, column };

// D(u, v) = 1 iff tiles u and v may both contain the same row (column axis:
// the same column) without claiming an element twice. Diagonal is 1.
class CompatibilityMatrix {
 public:
  explicit CompatibilityMatrix(std::size_t size);

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] bool operator()(std::size_t u, std::size_t v) const { return entries_[u * size_ + v] != 0; }
  void set(std::size_t u, std::size_t v, bool value);

 private:
  std::size_t size_;
  std::vector<std::uint8_t> entries_;
};

// Gain of adding row (column) `index` to each tile given the tile's current
// columns (rows).
std::vector<double> tile_gains(const LikelihoodField& field, const Tiling& tiling, std::size_t index,
                               Axis axis);

CompatibilityMatrix compatibility(const Tiling& tiling, Axis axis);

// Maximum-gain clique of positive-gain tiles; ties go to the lexicographically
// smallest index set.
Indicator best_assignment(const std::vector<double>& gains, const CompatibilityMatrix& compat);

// Rows in ascending order, then columns in ascending order.
Tiling icm_sweep(const Tiling& tiling, const LikelihoodField& field);

// Starting point of one restart. Valid (non-overlapping) by construction.
Tiling icm_initial_tiling(const LikelihoodField& field, std::size_t tile_count, const SolverParams& params,
                          std::size_t restart);

struct IcmResult {
  Tiling tiling;
  std::size_t best_restart = 0;
  std::size_t iterations = 0;   // sweeps used by the selected restart
  bool converged = true;        // every restart reached a fixed point
  std::vector<double> costs;    // MDL cost per restart, charged for all T requested tiles
};

IcmResult run_icm(const LikelihoodField& field, std::size_t tile_count, const SolverParams& params);

Solver icm_solver();

}  // namespace mta
