#include "mta/eval.hpp"

#include "mta/error.hpp"
#include "mta/scoring.hpp"
#include "mta/tiling.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <string>

namespace mta {

namespace {

void require_same_shape(const ElementLabels& a, const ElementLabels& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("label matrices differ in dimensions");
}

int max_label(const ElementLabels& labels) { return labels.size() == 0 ? 0 : std::max(0, labels.maxCoeff()); }

}  // namespace

double hamming(const ElementLabels& truth, const ElementLabels& pred) {
  require_same_shape(truth, pred);
  if (truth.size() == 0) return 0.0;
  Eigen::Index differing = 0;
  for (Eigen::Index k = 0; k < truth.size(); ++k) {
    if ((truth.data()[k] != 0) != (pred.data()[k] != 0)) ++differing;
  }
  return static_cast<double>(differing) / static_cast<double>(truth.size());
}

TileMatching greedy_match(const ElementLabels& truth, const ElementLabels& pred) {
  require_same_shape(truth, pred);
  const int u_max = max_label(truth);
  const int v_max = max_label(pred);
  std::vector<std::vector<long>> overlap(static_cast<std::size_t>(u_max) + 1,
                                         std::vector<long>(static_cast<std::size_t>(v_max) + 1, 0));
  std::vector<std::uint8_t> truth_present(static_cast<std::size_t>(u_max) + 1, 0);
  std::vector<std::uint8_t> pred_present(static_cast<std::size_t>(v_max) + 1, 0);
  for (Eigen::Index k = 0; k < truth.size(); ++k) {
    const int u = truth.data()[k];
    const int v = pred.data()[k];
    if (u < 0 || v < 0) throw InvalidArgument("labels must be non-negative");
    truth_present[static_cast<std::size_t>(u)] = 1;
    pred_present[static_cast<std::size_t>(v)] = 1;
    if (u > 0 && v > 0) ++overlap[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
  }

  TileMatching out;
  std::vector<std::uint8_t> used_u(truth_present.size(), 0);
  std::vector<std::uint8_t> used_v(pred_present.size(), 0);
  for (;;) {
    long best = 0;
    int bu = 0;
    int bv = 0;
    for (int u = 1; u <= u_max; ++u) {
      if (used_u[static_cast<std::size_t>(u)] != 0) continue;
      for (int v = 1; v <= v_max; ++v) {
        if (used_v[static_cast<std::size_t>(v)] != 0) continue;
        const long o = overlap[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
        if (o > best) {
          best = o;
          bu = u;
          bv = v;
        }
      }
    }
    if (best == 0) break;
    used_u[static_cast<std::size_t>(bu)] = 1;
    used_v[static_cast<std::size_t>(bv)] = 1;
    out.pairs.emplace_back(bu, bv);
  }
  for (int u = 1; u <= u_max; ++u) {
    if (truth_present[static_cast<std::size_t>(u)] != 0 && used_u[static_cast<std::size_t>(u)] == 0) {
      out.unmatched_truth.push_back(u);
    }
  }
  for (int v = 1; v <= v_max; ++v) {
    if (pred_present[static_cast<std::size_t>(v)] != 0 && used_v[static_cast<std::size_t>(v)] == 0) {
      out.unmatched_pred.push_back(v);
    }
  }
  return out;
}

double classification_error(const ElementLabels& truth, const ElementLabels& pred) {
  const TileMatching matching = greedy_match(truth, pred);
  if (truth.size() == 0) return 0.0;
  std::map<int, int> rename{{0, 0}};
  for (const auto& [u, v] : matching.pairs) rename[v] = u;
  int fresh = max_label(truth);
  for (int v : matching.unmatched_pred) rename[v] = ++fresh;

  Eigen::Index mismatches = 0;
  for (Eigen::Index k = 0; k < truth.size(); ++k) {
    if (rename.at(pred.data()[k]) != truth.data()[k]) ++mismatches;
  }
  return static_cast<double>(mismatches) / static_cast<double>(truth.size());
}

double relative_cost(const Tiling& pred, const Tiling& truth, const LikelihoodField& field) {
  return mdl_cost(pred, field) - mdl_cost(truth, field);
}

Tiling brute_force_map(const LikelihoodField& field, std::size_t tile_count) {
  const auto n = static_cast<std::size_t>(field.rows());
  const auto m = static_cast<std::size_t>(field.cols());
  const std::size_t bits = tile_count * (n + m);
  if (bits > kBruteForceMaxBits) {
    throw InvalidArgument("brute force needs T*(N+M) <= " + std::to_string(kBruteForceMaxBits) + ", got " +
                          std::to_string(bits));
  }
  const std::size_t row_bits = tile_count * n;
  // Bit k of the flattened string is bit (bits - 1 - k) of the mask, so ascending
  // masks visit assignments in lexicographic order.
  auto bit = [bits](std::uint32_t mask, std::size_t k) { return ((mask >> (bits - 1 - k)) & 1u) != 0; };

  std::uint32_t best_mask = 0;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> owner(n * m);
  const std::uint64_t total = std::uint64_t{1} << bits;
  for (std::uint64_t wide = 0; wide < total; ++wide) {
    const auto mask = static_cast<std::uint32_t>(wide);
    std::fill(owner.begin(), owner.end(), -1);
    double score = 0.0;
    bool overlaps = false;
    for (std::size_t t = 0; t < tile_count && !overlaps; ++t) {
      for (std::size_t i = 0; i < n && !overlaps; ++i) {
        if (!bit(mask, t * n + i)) continue;
        for (std::size_t j = 0; j < m; ++j) {
          if (!bit(mask, row_bits + t * m + j)) continue;
          if (owner[i * m + j] >= 0) {
            overlaps = true;
            break;
          }
          owner[i * m + j] = static_cast<int>(t);
          score += field.ratio(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
      }
    }
    if (!overlaps && score > best) {
      best = score;
      best_mask = mask;
    }
  }

  Tiling tiling = Tiling::blank(n, m, tile_count);
  for (std::size_t t = 0; t < tile_count; ++t) {
    for (std::size_t i = 0; i < n; ++i) tiling.tiles[t].rows[i] = bit(best_mask, t * n + i) ? 1 : 0;
    for (std::size_t j = 0; j < m; ++j) tiling.tiles[t].cols[j] = bit(best_mask, row_bits + t * m + j) ? 1 : 0;
  }
  return prune_empty(std::move(tiling));
}

}  // namespace mta
