#include "mta/sumprod.hpp"

#include "mta/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mta {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kAbsoluteTolerance = 1e-12;

// log(1 + e^x)
double softplus(double x) {
  if (x == kNegInf) return 0.0;
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double clip(double value, double bound) { return std::clamp(value, -bound, bound); }

Matrix filled(std::size_t rows, std::size_t cols, double value) {
  return Matrix::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols), value);
}

}  // namespace

double msg_g_to_s(double log_ratio, std::span<const double> other_claims) {
  double top = -log_ratio;
  for (double c : other_claims) top = std::max(top, c);
  double sum = std::exp(-log_ratio - top);
  for (double c : other_claims) sum += std::exp(c - top);
  return -(top + std::log(sum));
}

double msg_f_to_axis(double opposite, double claim) {
  if (opposite == kNegInf) return 0.0;
  if (opposite == std::numeric_limits<double>::infinity()) return claim;
  const double joint = opposite + claim;
  if (opposite >= 0.0 && joint >= 0.0) {
    return claim + std::log1p(std::exp(-joint)) - std::log1p(std::exp(-opposite));
  }
  return softplus(joint) - softplus(opposite);
}

double msg_axis_to_f(std::span<const double> incoming) {
  return std::accumulate(incoming.begin(), incoming.end(), 0.0);
}

double msg_f_to_s(double col_msg, double row_msg) {
  if (col_msg == kNegInf || row_msg == kNegInf) return kNegInf;
  const double top = std::max({col_msg, row_msg, 0.0});
  const double norm = top + std::log(std::exp(col_msg - top) + std::exp(row_msg - top) + std::exp(-top));
  return col_msg + row_msg - norm;
}

BinaryProbabilities probabilities_from_log_ratio(double log_ratio) {
  if (log_ratio >= 0.0) {
    const double e = std::exp(-log_ratio);
    return {e / (1.0 + e), 1.0 / (1.0 + e)};
  }
  const double e = std::exp(log_ratio);
  return {1.0 / (1.0 + e), e / (1.0 + e)};
}

MessageState init_messages(const LikelihoodField& field, std::size_t tile_count) {
  if (tile_count == 0) throw InvalidArgument("sum-product needs at least one tile");
  MessageState s;
  s.n_rows = static_cast<std::size_t>(field.rows());
  s.n_cols = static_cast<std::size_t>(field.cols());
  s.tile_count = tile_count;
  const Matrix zero = filled(s.n_rows, s.n_cols, 0.0);
  s.g_to_s.assign(tile_count, zero);
  s.f_to_r.assign(tile_count, zero);
  s.r_to_f.assign(tile_count, zero);
  s.f_to_c.assign(tile_count, zero);
  s.c_to_f.assign(tile_count, zero);
  s.f_to_s.assign(tile_count, filled(s.n_rows, s.n_cols, kNegInf));
  s.row_frozen.assign(tile_count, std::vector<std::int8_t>(s.n_rows, 0));
  s.col_frozen.assign(tile_count, std::vector<std::int8_t>(s.n_cols, 0));
  return s;
}

double clip_for_iteration(std::size_t iteration, const SolverParams& params) {
  const double ramp = params.clamp_start * std::pow(params.clamp_growth, static_cast<double>(iteration));
  return std::min(params.clamp_bound, ramp);
}

void sweep(MessageState& state, const LikelihoodField& field, const SolverParams& params) {
  const auto rows = static_cast<Eigen::Index>(state.n_rows);
  const auto cols = static_cast<Eigen::Index>(state.n_cols);
  if (field.rows() != rows || field.cols() != cols) {
    throw InvalidArgument("message state and likelihood field dimensions differ");
  }
  const double bound = clip_for_iteration(state.iteration, params);
  state.clip = bound;
  const std::size_t tiles = state.tile_count;
  const Matrix& ratio = field.log_ratio();

  for (std::size_t t = 0; t < tiles; ++t) {
    Matrix& g = state.g_to_s[t];
    Matrix& fr = state.f_to_r[t];
    Matrix& rf = state.r_to_f[t];
    Matrix& fc = state.f_to_c[t];
    Matrix& cf = state.c_to_f[t];
    Matrix& fs = state.f_to_s[t];
    const auto& row_frozen = state.row_frozen[t];
    const auto& col_frozen = state.col_frozen[t];

    // g -> s: competition with the claims of every other tile.
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double neg_ratio = -ratio(i, j);
        double top = neg_ratio;
        for (std::size_t k = 0; k < tiles; ++k) {
          if (k != t) top = std::max(top, state.f_to_s[k](i, j));
        }
        double sum = std::exp(neg_ratio - top);
        for (std::size_t k = 0; k < tiles; ++k) {
          if (k != t) sum += std::exp(state.f_to_s[k](i, j) - top);
        }
        g(i, j) = clip(-(top + std::log(sum)), bound);
      }
    }

    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) fr(i, j) = clip(msg_f_to_axis(cf(i, j), g(i, j)), bound);
    }

    const Vector row_sum = fr.rowwise().sum();
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        const auto frozen = row_frozen[static_cast<std::size_t>(i)];
        rf(i, j) = frozen != 0 ? frozen * bound : clip(row_sum(i) - fr(i, j), bound);
      }
    }

    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) fc(i, j) = clip(msg_f_to_axis(rf(i, j), g(i, j)), bound);
    }

    const Eigen::RowVectorXd col_sum = fc.colwise().sum();
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto frozen = col_frozen[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < rows; ++i) {
        cf(i, j) = frozen != 0 ? frozen * bound : clip(col_sum(j) - fc(i, j), bound);
      }
    }

    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) fs(i, j) = clip(msg_f_to_s(cf(i, j), rf(i, j)), bound);
    }
  }

  ++state.iteration;

  if (state.iteration >= params.freeze_after) {
    const Matrix rb = row_beliefs(state);
    const Matrix cb = col_beliefs(state);
    for (std::size_t t = 0; t < tiles; ++t) {
      const auto ti = static_cast<Eigen::Index>(t);
      for (std::size_t i = 0; i < state.n_rows; ++i) {
        const double b = rb(ti, static_cast<Eigen::Index>(i));
        if (state.row_frozen[t][i] == 0 && std::abs(b) > params.freeze_belief) {
          state.row_frozen[t][i] = b > 0.0 ? 1 : -1;
        }
      }
      for (std::size_t j = 0; j < state.n_cols; ++j) {
        const double b = cb(ti, static_cast<Eigen::Index>(j));
        if (state.col_frozen[t][j] == 0 && std::abs(b) > params.freeze_belief) {
          state.col_frozen[t][j] = b > 0.0 ? 1 : -1;
        }
      }
    }
  }
}

Residual message_residual(const std::vector<Matrix>& prev, const std::vector<Matrix>& curr) {
  if (prev.size() != curr.size()) throw InvalidArgument("message arrays differ in tile count");
  Residual r;
  for (std::size_t t = 0; t < prev.size(); ++t) {
    const Matrix& a = prev[t];
    const Matrix& b = curr[t];
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw InvalidArgument("message arrays differ in dimensions");
    }
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const bool a_inf = std::isinf(a(i, j));
        const bool b_inf = std::isinf(b(i, j));
        if (a_inf && b_inf && a(i, j) == b(i, j)) continue;
        if (a_inf || b_inf) {
          r.diverged = true;
          continue;
        }
        r.change += std::abs(a(i, j) - b(i, j));
        r.reference += std::abs(a(i, j));
      }
    }
  }
  if (r.diverged) r.change = std::numeric_limits<double>::infinity();
  return r;
}

bool converged(const Residual& residual, double tol) {
  if (residual.diverged) return false;
  return residual.change <= kAbsoluteTolerance || residual.change <= tol * residual.reference;
}

bool converged(const MessageState& prev, const MessageState& curr, double tol) {
  return converged(message_residual(prev.f_to_s, curr.f_to_s), tol);
}

Matrix row_beliefs(const MessageState& state) {
  Matrix out(static_cast<Eigen::Index>(state.tile_count), static_cast<Eigen::Index>(state.n_rows));
  for (std::size_t t = 0; t < state.tile_count; ++t) {
    out.row(static_cast<Eigen::Index>(t)) = state.f_to_r[t].rowwise().sum().transpose();
  }
  return out;
}

Matrix col_beliefs(const MessageState& state) {
  Matrix out(static_cast<Eigen::Index>(state.tile_count), static_cast<Eigen::Index>(state.n_cols));
  for (std::size_t t = 0; t < state.tile_count; ++t) {
    out.row(static_cast<Eigen::Index>(t)) = state.f_to_c[t].colwise().sum();
  }
  return out;
}

std::size_t decimate(MessageState& state, double margin) {
  const Matrix rb = row_beliefs(state);
  const Matrix cb = col_beliefs(state);
  std::size_t frozen = 0;
  std::int8_t* fallback = nullptr;
  double fallback_belief = 0.0;
  double best = -1.0;
  auto consider = [&](std::int8_t& flag, double belief) {
    if (flag != 0) return;
    if (std::abs(belief) >= margin) {
      flag = belief > 0.0 ? 1 : -1;
      ++frozen;
    } else if (std::abs(belief) > best) {
      best = std::abs(belief);
      fallback = &flag;
      fallback_belief = belief;
    }
  };
  for (std::size_t t = 0; t < state.tile_count; ++t) {
    const auto ti = static_cast<Eigen::Index>(t);
    for (std::size_t i = 0; i < state.n_rows; ++i) consider(state.row_frozen[t][i], rb(ti, static_cast<Eigen::Index>(i)));
    for (std::size_t j = 0; j < state.n_cols; ++j) consider(state.col_frozen[t][j], cb(ti, static_cast<Eigen::Index>(j)));
  }
  if (frozen == 0 && fallback != nullptr) {
    *fallback = fallback_belief > 0.0 ? 1 : -1;
    frozen = 1;
  }
  return frozen;
}

Tiling decode(const MessageState& state, const LikelihoodField& field, double threshold) {
  const Matrix rb = row_beliefs(state);
  const Matrix cb = col_beliefs(state);
  Tiling raw = Tiling::blank(state.n_rows, state.n_cols, state.tile_count);
  auto decide = [threshold](std::int8_t frozen, double belief) -> std::uint8_t {
    if (frozen != 0) return frozen > 0 ? 1 : 0;
    return belief > threshold ? 1 : 0;
  };
  for (std::size_t t = 0; t < state.tile_count; ++t) {
    const auto ti = static_cast<Eigen::Index>(t);
    for (std::size_t i = 0; i < state.n_rows; ++i) {
      raw.tiles[t].rows[i] = decide(state.row_frozen[t][i], rb(ti, static_cast<Eigen::Index>(i)));
    }
    for (std::size_t j = 0; j < state.n_cols; ++j) {
      raw.tiles[t].cols[j] = decide(state.col_frozen[t][j], cb(ti, static_cast<Eigen::Index>(j)));
    }
  }
  return resolve_overlaps(raw, field);
}

SumProductResult run_sum_product(const LikelihoodField& field, std::size_t tile_count,
                                 const SolverParams& params) {
  params.validate();
  SumProductResult result;
  if (tile_count == 0) {
    result.tiling = Tiling(static_cast<std::size_t>(field.rows()), static_cast<std::size_t>(field.cols()));
    result.converged = true;
    return result;
  }

  MessageState state = init_messages(field, tile_count);
  while (state.iteration < params.max_iterations) {
    const std::vector<Matrix> previous = state.f_to_s;
    sweep(state, field, params);
    const Residual r = message_residual(previous, state.f_to_s);
    result.residuals.push_back(r.diverged          ? std::numeric_limits<double>::infinity()
                               : r.reference > 0.0 ? r.change / r.reference
                                                   : r.change);
    if (state.clip < params.clamp_bound || !converged(r, params.convergence_tol)) continue;
    if (params.decimate && decimate(state, params.decimate_margin) > 0) continue;
    result.converged = true;
    break;
  }
  result.iterations = state.iteration;
  result.tiling = decode(state, field, params.decode_threshold);
  return result;
}

Solver sum_product_solver() {
  return [](const LikelihoodField& field, std::size_t tiles, const SolverParams& params) {
    SumProductResult r = run_sum_product(field, tiles, params);
    return SolverOutcome{std::move(r.tiling), r.converged, r.iterations};
  };
}

}  // namespace mta
