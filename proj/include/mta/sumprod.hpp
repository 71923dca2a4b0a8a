#pragma once

#include "mta/model_selection.hpp"
#include "mta/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mta {

// Messages are log-ratios log p(x=1)/p(x=0) of binary variables. Negative
// infinity encodes a hard zero.

// Factor g_ij to element node s^t_ij, given the claims s^k -> g of every other tile k.
double msg_g_to_s(double log_ratio, std::span<const double> other_claims);

// Factor f^t_ij to a row (column) node, given the opposite axis message and
// the element message s -> f.
double msg_f_to_axis(double opposite, double claim);

// Row (column) node to factor f^t_ij: sum of the other factors' messages.
double msg_axis_to_f(std::span<const double> incoming);

// Factor f^t_ij to element node s^t_ij. Symmetric in its arguments.
double msg_f_to_s(double col_msg, double row_msg);

struct BinaryProbabilities {
  double p0;
  double p1;
};

// Recovers (p(x=0), p(x=1)) from a finite log-ratio without overflow.
BinaryProbabilities probabilities_from_log_ratio(double log_ratio);

/// All messages of the tile factor graph plus the hardening state.
///
/// Each array holds one n_rows x n_cols matrix per tile. Frozen flags are
/// +1 (forced on), -1 (forced off) or 0 (free).
struct MessageState {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::size_t tile_count = 0;

  std::vector<Matrix> g_to_s;
  std::vector<Matrix> f_to_r;
  std::vector<Matrix> r_to_f;
  std::vector<Matrix> f_to_c;
  std::vector<Matrix> c_to_f;
  std::vector<Matrix> f_to_s;

  std::vector<std::vector<std::int8_t>> row_frozen;
  std::vector<std::vector<std::int8_t>> col_frozen;

  std::size_t iteration = 0;
  double clip = 0.0;  // clip bound used by the most recent sweep
};

// Zero messages everywhere except f -> s (the s -> g direction), which starts
// at -inf: no element is claimed yet. tile_count must be positive.
MessageState init_messages(const LikelihoodField& field, std::size_t tile_count);

// Clip bound for the sweep that follows `iteration` completed sweeps.
double clip_for_iteration(std::size_t iteration, const SolverParams& params);

// One pass over all tiles in order, each updating g->s, f->r, r->f, f->c,
// c->f, f->s over every element; applies clipping and the freeze rule.
void sweep(MessageState& state, const LikelihoodField& field, const SolverParams& params);

struct Residual {
  double change = 0.0;     // sum |prev - curr| over f -> s
  double reference = 0.0;  // sum |prev| over finite entries
  bool diverged = false;   // an entry moved between -inf and a finite value
};

Residual message_residual(const std::vector<Matrix>& prev, const std::vector<Matrix>& curr);

// Relative-change test on the f -> s messages with an absolute 1e-12 fallback.
bool converged(const MessageState& prev, const MessageState& curr, double tol);
bool converged(const Residual& residual, double tol);

// Fused beliefs: sum of f -> r over columns, and of f -> c over rows.
Matrix row_beliefs(const MessageState& state);  // tile_count x n_rows
Matrix col_beliefs(const MessageState& state);  // tile_count x n_cols

// Freezes every free variable with |belief| >= margin; when there is none,
// freezes the single free variable with the largest |belief|. Returns the
// number of variables frozen (0 once everything is frozen).
std::size_t decimate(MessageState& state, double margin);

// Thresholds the beliefs (frozen variables keep their forced value), resolves
// overlaps and prunes empty tiles.
Tiling decode(const MessageState& state, const LikelihoodField& field, double threshold);

// Makes a possibly overlapping tiling valid. Each contested element goes to
// the claiming tile with the largest ratio sum; losers drop the element's row
// or column, whichever costs less. Contested tiles left with a net positive
// description length are removed, then empty tiles are pruned.
Tiling resolve_overlaps(const Tiling& raw, const LikelihoodField& field);

struct SumProductResult {
  Tiling tiling;
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<double> residuals;  // relative residual per sweep
};

SumProductResult run_sum_product(const LikelihoodField& field, std::size_t tile_count,
                                 const SolverParams& params);

// Adapter for select_tile_count.
Solver sum_product_solver();

}  // namespace mta
