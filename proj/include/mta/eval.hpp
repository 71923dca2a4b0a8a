#pragma once

#include "mta/types.hpp"

#include <utility>
#include <vector>

namespace mta {

struct TileMatching {
  std::vector<std::pair<int, int>> pairs;  // (truth label, predicted label)
  std::vector<int> unmatched_truth;
  std::vector<int> unmatched_pred;
};

// Fraction of elements whose tile/background status differs.
double hamming(const ElementLabels& truth, const ElementLabels& pred);

// One-to-one greedy matching on element overlap counts. Ties go to the
// smallest truth label, then the smallest predicted label.
TileMatching greedy_match(const ElementLabels& truth, const ElementLabels& pred);

// Fraction of mismatching elements after renaming predicted tiles through
// greedy_match. Unmatched predicted tiles get labels above every truth label.
double classification_error(const ElementLabels& truth, const ElementLabels& pred);

// mdl_cost(pred) - mdl_cost(truth).
double relative_cost(const Tiling& pred, const Tiling& truth, const LikelihoodField& field);

inline constexpr std::size_t kBruteForceMaxBits = 24;

// Exhaustive maximiser of log_joint_score over all T-tile configurations.
// Requires T * (N + M) <= 24.
Tiling brute_force_map(const LikelihoodField& field, std::size_t tile_count);

}  // namespace mta
