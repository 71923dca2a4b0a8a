#include "mta/icm.hpp"

#include "mta/error.hpp"
#include "mta/scoring.hpp"
#include "mta/tiling.hpp"

#include <cmath>
#include <random>
#include <string>

namespace mta {

namespace {

bool disjoint(const Indicator& a, const Indicator& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != 0 && b[k] != 0) return false;
  }
  return true;
}

std::mt19937_64 restart_engine(std::uint64_t seed, std::size_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), 0x1c3u};
  return std::mt19937_64(seq);
}

// Depth-first enumeration of cliques in lexicographic order, so the first set
// reaching a given total is the lexicographically smallest one.
class CliqueSearch {
 public:
  CliqueSearch(const std::vector<double>& gains, const CompatibilityMatrix& compat) : gains_(gains), compat_(compat) {
    for (std::size_t t = 0; t < gains.size(); ++t) {
      if (gains[t] > 0.0) candidates_.push_back(t);
    }
    suffix_.assign(candidates_.size() + 1, 0.0);
    for (std::size_t k = candidates_.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + gains[candidates_[k]];
  }

  std::vector<std::size_t> run() {
    extend(0, 0.0);
    return best_set_;
  }

 private:
  void extend(std::size_t from, double total) {
    if (total > best_total_) {
      best_total_ = total;
      best_set_ = current_;
    }
    for (std::size_t k = from; k < candidates_.size(); ++k) {
      // Later sets are lexicographically larger, so only a strict improvement counts.
      if (total + suffix_[k] + 1e-12 * (1.0 + std::abs(best_total_)) <= best_total_) return;
      const std::size_t t = candidates_[k];
      bool fits = true;
      for (std::size_t u : current_) {
        if (!compat_(u, t)) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      current_.push_back(t);
      extend(k + 1, total + gains_[t]);
      current_.pop_back();
    }
  }

  const std::vector<double>& gains_;
  const CompatibilityMatrix& compat_;
  std::vector<std::size_t> candidates_;
  std::vector<double> suffix_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_set_;
  double best_total_ = 0.0;
};

// Alternating row/column refits of one tile restricted to uncovered elements,
// so the next seed lands outside the region this tile explains.
void grow_on_free(Tile& tile, const LikelihoodField& field, const std::vector<std::uint8_t>& covered) {
  const std::size_t rows = tile.rows.size();
  const std::size_t cols = tile.cols.size();
  for (int round = 0; round < 2; ++round) {
    for (std::size_t i = 0; i < rows; ++i) {
      double gain = 0.0;
      bool blocked = false;
      for (std::size_t j = 0; j < cols && !blocked; ++j) {
        if (tile.cols[j] == 0) continue;
        blocked = covered[j * rows + i] != 0;
        gain += field.ratio(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      tile.rows[i] = !blocked && gain > 0.0 ? 1 : 0;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      double gain = 0.0;
      bool blocked = false;
      for (std::size_t i = 0; i < rows && !blocked; ++i) {
        if (tile.rows[i] == 0) continue;
        blocked = covered[j * rows + i] != 0;
        gain += field.ratio(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      tile.cols[j] = !blocked && gain > 0.0 ? 1 : 0;
    }
  }
}

Tiling seeded_start(const LikelihoodField& field, std::size_t tile_count, std::mt19937_64& rng) {
  const auto rows = static_cast<std::size_t>(field.rows());
  const auto cols = static_cast<std::size_t>(field.cols());
  Tiling tiling = Tiling::blank(rows, cols, tile_count);
  std::vector<std::uint8_t> covered(rows * cols, 0);
  auto is_free_positive = [&](std::size_t i, std::size_t j) {
    return covered[j * rows + i] == 0 &&
           field.ratio(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0;
  };

  std::vector<std::pair<std::size_t, std::size_t>> seeds;
  for (std::size_t t = 0; t < tile_count; ++t) {
    seeds.clear();
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t i = 0; i < rows; ++i) {
        if (is_free_positive(i, j)) seeds.emplace_back(i, j);
      }
    }
    if (seeds.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, seeds.size() - 1);
    const std::size_t seed_row = seeds[pick(rng)].first;
    Tile& tile = tiling.tiles[t];
    tile.rows[seed_row] = 1;
    for (std::size_t j = 0; j < cols; ++j) tile.cols[j] = is_free_positive(seed_row, j) ? 1 : 0;
    grow_on_free(tile, field, covered);
    for (std::size_t i : tile.row_indices()) {
      for (std::size_t j : tile.col_indices()) covered[j * rows + i] = 1;
    }
  }
  return tiling;
}

Tiling bernoulli_start(const LikelihoodField& field, std::size_t tile_count, double density,
                       std::mt19937_64& rng) {
  const auto rows = static_cast<std::size_t>(field.rows());
  const auto cols = static_cast<std::size_t>(field.cols());
  Tiling tiling = Tiling::blank(rows, cols, tile_count);
  std::bernoulli_distribution on(density);
  std::uniform_int_distribution<std::size_t> any_row(0, rows - 1);
  std::uniform_int_distribution<std::size_t> any_col(0, cols - 1);
  for (Tile& tile : tiling.tiles) {
    for (auto& r : tile.rows) r = on(rng) ? 1 : 0;
    for (auto& c : tile.cols) c = on(rng) ? 1 : 0;
    if (tile.row_count() == 0) tile.rows[any_row(rng)] = 1;
    if (tile.col_count() == 0) tile.cols[any_col(rng)] = 1;
  }
  // Later tiles give up the columns of earlier tiles they share a row with.
  for (std::size_t t = 1; t < tile_count; ++t) {
    for (std::size_t u = 0; u < t; ++u) {
      if (disjoint(tiling.tiles[t].rows, tiling.tiles[u].rows)) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (tiling.tiles[u].cols[j] != 0) tiling.tiles[t].cols[j] = 0;
      }
    }
  }
  return tiling;
}

}  // namespace

CompatibilityMatrix::CompatibilityMatrix(std::size_t size) : size_(size), entries_(size * size, 0) {
  for (std::size_t t = 0; t < size; ++t) entries_[t * size + t] = 1;
}

void CompatibilityMatrix::set(std::size_t u, std::size_t v, bool value) {
  entries_[u * size_ + v] = value ? 1 : 0;
  entries_[v * size_ + u] = value ? 1 : 0;
}

std::vector<double> tile_gains(const LikelihoodField& field, const Tiling& tiling, std::size_t index,
                               Axis axis) {
  const std::size_t limit = axis == Axis::row ? tiling.n_rows : tiling.n_cols;
  if (index >= limit) throw InvalidArgument("index " + std::to_string(index) + " out of range");
  std::vector<double> gains(tiling.tile_count(), 0.0);
  const auto fixed = static_cast<Eigen::Index>(index);
  for (std::size_t t = 0; t < tiling.tile_count(); ++t) {
    const Tile& tile = tiling.tiles[t];
    double g = 0.0;
    if (axis == Axis::row) {
      for (std::size_t j = 0; j < tiling.n_cols; ++j) {
        if (tile.cols[j] != 0) g += field.ratio(fixed, static_cast<Eigen::Index>(j));
      }
    } else {
      for (std::size_t i = 0; i < tiling.n_rows; ++i) {
        if (tile.rows[i] != 0) g += field.ratio(static_cast<Eigen::Index>(i), fixed);
      }
    }
    gains[t] = g;
  }
  return gains;
}

CompatibilityMatrix compatibility(const Tiling& tiling, Axis axis) {
  CompatibilityMatrix d(tiling.tile_count());
  for (std::size_t u = 0; u < tiling.tile_count(); ++u) {
    for (std::size_t v = u + 1; v < tiling.tile_count(); ++v) {
      const Tile& a = tiling.tiles[u];
      const Tile& b = tiling.tiles[v];
      d.set(u, v, axis == Axis::row ? disjoint(a.cols, b.cols) : disjoint(a.rows, b.rows));
    }
  }
  return d;
}

Indicator best_assignment(const std::vector<double>& gains, const CompatibilityMatrix& compat) {
  if (compat.size() != gains.size()) throw InvalidArgument("gain and compatibility sizes differ");
  for (double g : gains) {
    if (!std::isfinite(g)) throw InvalidArgument("gains must be finite");
  }
  Indicator chosen(gains.size(), 0);
  for (std::size_t t : CliqueSearch(gains, compat).run()) chosen[t] = 1;
  return chosen;
}

Tiling icm_sweep(const Tiling& tiling, const LikelihoodField& field) {
  Tiling next = tiling;
  const CompatibilityMatrix row_compat = compatibility(next, Axis::row);
  for (std::size_t i = 0; i < next.n_rows; ++i) {
    const Indicator pick = best_assignment(tile_gains(field, next, i, Axis::row), row_compat);
    for (std::size_t t = 0; t < next.tile_count(); ++t) next.tiles[t].rows[i] = pick[t];
  }
  const CompatibilityMatrix col_compat = compatibility(next, Axis::column);
  for (std::size_t j = 0; j < next.n_cols; ++j) {
    const Indicator pick = best_assignment(tile_gains(field, next, j, Axis::column), col_compat);
    for (std::size_t t = 0; t < next.tile_count(); ++t) next.tiles[t].cols[j] = pick[t];
  }
  return next;
}

Tiling icm_initial_tiling(const LikelihoodField& field, std::size_t tile_count, const SolverParams& params,
                          std::size_t restart) {
  std::mt19937_64 rng = restart_engine(params.rng_seed, restart);
  if (params.icm_init == IcmInit::bernoulli) {
    return bernoulli_start(field, tile_count, params.icm_init_density, rng);
  }
  return seeded_start(field, tile_count, rng);
}

IcmResult run_icm(const LikelihoodField& field, std::size_t tile_count, const SolverParams& params) {
  params.validate();
  IcmResult result;
  result.tiling = Tiling(static_cast<std::size_t>(field.rows()), static_cast<std::size_t>(field.cols()));
  if (tile_count == 0) return result;

  double best_cost = 0.0;
  for (std::size_t restart = 0; restart < params.restarts; ++restart) {
    Tiling current = icm_initial_tiling(field, tile_count, params, restart);
    std::size_t sweeps = 0;
    bool fixed_point = false;
    while (sweeps < params.max_iterations) {
      Tiling next = icm_sweep(current, field);
      ++sweeps;
      if (next == current) {
        fixed_point = true;
        break;
      }
      current = std::move(next);
    }
    result.converged = result.converged && fixed_point;
    // The tile count is fixed for the whole run, so the code length is charged
    // for every requested tile and the cost ranks restarts by joint score.
    Tiling pruned = prune_empty(std::move(current));
    const double cost = -log_joint_score(pruned, field) + static_cast<double>(tile_count) * tile_code_length(field);
    result.costs.push_back(cost);
    if (restart == 0 || cost < best_cost) {
      best_cost = cost;
      result.tiling = std::move(pruned);
      result.best_restart = restart;
      result.iterations = sweeps;
    }
  }
  return result;
}

Solver icm_solver() {
  return [](const LikelihoodField& field, std::size_t tiles, const SolverParams& params) {
    IcmResult r = run_icm(field, tiles, params);
    return SolverOutcome{std::move(r.tiling), r.converged, r.iterations};
  };
}

}  // namespace mta
