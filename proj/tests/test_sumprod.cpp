#include "mta/error.hpp"
#include "mta/eval.hpp"
#include "mta/scoring.hpp"
#include "mta/sumprod.hpp"
#include "mta/tiling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace mta {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Direct probability-domain evaluation of the four update rules, usable only
// for moderate magnitudes.
double naive_g_to_s(double lam, const std::vector<double>& others) {
  double s = std::exp(-lam);
  for (double o : others) s += std::exp(o);
  return -std::log(s);
}
double naive_f_to_axis(double a, double b) { return std::log((std::exp(a + b) + 1.0) / (std::exp(a) + 1.0)); }
double naive_f_to_s(double c, double r) { return c + r - std::log(std::exp(c) + std::exp(r) + 1.0); }

Matrix planted(std::size_t n, std::size_t m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
               double inside, double outside) {
  Matrix lam = Matrix::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m), outside);
  for (std::size_t i : rows) {
    for (std::size_t j : cols) lam(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = inside;
  }
  return lam;
}

TEST(MsgGToS, Examples) {
  EXPECT_NEAR(msg_g_to_s(0.7, {}), 0.7, 1e-12);
  const std::vector<double> unclaimed{-kInf};
  EXPECT_NEAR(msg_g_to_s(0.0, unclaimed), 0.0, 1e-12);
  const std::vector<double> half{std::log(0.5)};
  EXPECT_NEAR(msg_g_to_s(std::log(2.0), half), 0.0, 1e-12);
}

TEST(MsgGToS, EmptyClaimsReturnRatioExactly) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-600.0, 600.0);
  for (int k = 0; k < 1000; ++k) {
    const double lam = u(rng);
    EXPECT_EQ(msg_g_to_s(lam, {}), lam);
  }
}

TEST(MsgGToS, MatchesNaiveFormula) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> others(rng() % 4);
    for (double& o : others) o = u(rng);
    const double lam = u(rng);
    EXPECT_NEAR(msg_g_to_s(lam, others), naive_g_to_s(lam, others), 1e-9);
  }
}

TEST(MsgGToS, StableForLargeMagnitudes) {
  const std::vector<double> big{700.0, -kInf};
  EXPECT_NEAR(msg_g_to_s(-700.0, big), -700.0 - std::log(2.0), 1e-9);
  EXPECT_TRUE(std::isfinite(msg_g_to_s(700.0, std::vector<double>{-700.0})));
}

TEST(MsgFToAxis, Examples) {
  for (double a : {-5.0, 0.0, 3.0, -kInf}) EXPECT_NEAR(msg_f_to_axis(a, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(msg_f_to_axis(-kInf, 5.0), 0.0, 1e-12);
  EXPECT_NEAR(msg_f_to_axis(0.0, std::log(3.0)), std::log(2.0), 1e-12);
}

TEST(MsgFToAxis, MatchesNaiveFormula) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng), b = u(rng);
    EXPECT_NEAR(msg_f_to_axis(a, b), naive_f_to_axis(a, b), 1e-9);
  }
}

TEST(MsgFToAxis, AttenuatesEvidence) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-700.0, 700.0);
  for (int k = 0; k < 2000; ++k) {
    const double a = u(rng), b = u(rng);
    const double out = msg_f_to_axis(a, b);
    ASSERT_TRUE(std::isfinite(out));
    const double slack = 1e-9 * (1.0 + std::abs(b));
    if (b >= 0.0) {
      EXPECT_GE(out, -slack);
      EXPECT_LE(out, b + slack);
    } else {
      EXPECT_GE(out, b - slack);
      EXPECT_LE(out, slack);
    }
  }
}

TEST(MsgAxisToF, Examples) {
  EXPECT_EQ(msg_axis_to_f({}), 0.0);
  const std::vector<double> two{1.5, -0.5};
  EXPECT_NEAR(msg_axis_to_f(two), 1.0, 1e-12);
  const std::vector<double> absorbing{-kInf, 2.0};
  EXPECT_EQ(msg_axis_to_f(absorbing), -kInf);
}

TEST(MsgFToS, Examples) {
  EXPECT_NEAR(msg_f_to_s(0.0, 0.0), -std::log(3.0), 1e-12);
  EXPECT_NEAR(msg_f_to_s(0.0, 0.0), -1.0986, 5e-5);
  EXPECT_EQ(msg_f_to_s(-kInf, 1.7), -kInf);
  EXPECT_EQ(msg_f_to_s(4.0, -kInf), -kInf);
  EXPECT_NEAR(msg_f_to_s(1.0, 1.0), 2.0 - std::log(2.0 * std::exp(1.0) + 1.0), 1e-12);
}

TEST(MsgFToS, SymmetricAndMatchesNaive) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> wide(-700.0, 700.0);
  std::uniform_real_distribution<double> narrow(-10.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = wide(rng), b = wide(rng);
    EXPECT_EQ(msg_f_to_s(a, b), msg_f_to_s(b, a));
    EXPECT_TRUE(std::isfinite(msg_f_to_s(a, b)));
    const double c = narrow(rng), r = narrow(rng);
    EXPECT_NEAR(msg_f_to_s(c, r), naive_f_to_s(c, r), 1e-9);
  }
}

TEST(LogRatio, ReconstructionIdentity) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-700.0, 700.0);
  std::vector<double> values{0.0, 700.0, -700.0, 36.0, -36.0};
  for (int k = 0; k < 1000; ++k) values.push_back(u(rng));
  for (double pi : values) {
    const BinaryProbabilities p = probabilities_from_log_ratio(pi);
    ASSERT_TRUE(std::isfinite(p.p0) && std::isfinite(p.p1));
    EXPECT_NEAR(p.p0 + p.p1, 1.0, 1e-12);
    // The ratio is exact while both probabilities stay representable.
    if (std::abs(pi) < 700.0) EXPECT_NEAR(std::log(p.p1) - std::log(p.p0), pi, 1e-12 * std::max(1.0, std::abs(pi)));
  }
}

TEST(InitMessages, Contract) {
  const LikelihoodField f = LikelihoodField::from_log_ratio(Matrix::Random(4, 3));
  const MessageState s = init_messages(f, 2);
  EXPECT_EQ(s.iteration, 0u);
  for (std::size_t t = 0; t < 2; ++t) {
    EXPECT_EQ(s.r_to_f[t], Matrix::Zero(4, 3));
    EXPECT_EQ(s.g_to_s[t], Matrix::Zero(4, 3));
    EXPECT_EQ(s.f_to_r[t], Matrix::Zero(4, 3));
    EXPECT_EQ(s.c_to_f[t], Matrix::Zero(4, 3));
    EXPECT_EQ(s.f_to_c[t], Matrix::Zero(4, 3));
    EXPECT_TRUE((s.f_to_s[t].array() == -kInf).all());
  }
  EXPECT_THROW(init_messages(f, 0), InvalidArgument);
}

TEST(Sweep, UniformFieldLeavesRowMessagesAtZero) {
  const LikelihoodField f = LikelihoodField::from_log_ratio(Matrix::Zero(5, 4));
  const SolverParams params;
  MessageState one = init_messages(f, 1);
  sweep(one, f, params);
  EXPECT_EQ(one.f_to_r[0], Matrix::Zero(5, 4));
  EXPECT_EQ(one.iteration, 1u);
  // With more tiles the first tile still sees only unclaimed elements.
  MessageState two = init_messages(f, 2);
  sweep(two, f, params);
  EXPECT_EQ(two.f_to_r[0], Matrix::Zero(5, 4));
}

TEST(Sweep, DeterministicAndClamped) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 30.0);
  Matrix lam(6, 5);
  for (Eigen::Index k = 0; k < lam.size(); ++k) lam.data()[k] = g(rng);
  const LikelihoodField f = LikelihoodField::from_log_ratio(lam);
  SolverParams params;
  MessageState a = init_messages(f, 3);
  MessageState b = init_messages(f, 3);
  for (int k = 0; k < 150; ++k) {
    sweep(a, f, params);
    sweep(b, f, params);
    for (const auto* arr : {&a.g_to_s, &a.f_to_r, &a.r_to_f, &a.f_to_c, &a.c_to_f, &a.f_to_s}) {
      for (const Matrix& m : *arr) {
        for (Eigen::Index e = 0; e < m.size(); ++e) {
          const double v = m.data()[e];
          ASSERT_TRUE(v == -kInf || std::abs(v) <= params.clamp_bound);
        }
      }
    }
  }
  EXPECT_EQ(a.f_to_s, b.f_to_s);
  EXPECT_EQ(a.f_to_r, b.f_to_r);
  EXPECT_EQ(a.row_frozen, b.row_frozen);
}

TEST(Sweep, FixedPointReproducesItself) {
  const LikelihoodField f = LikelihoodField::from_log_ratio(planted(8, 8, {1, 2, 3}, {2, 4, 6}, 4.0, -4.0));
  SolverParams params;
  MessageState s = init_messages(f, 1);
  for (int k = 0; k < 400; ++k) sweep(s, f, params);
  const MessageState before = s;
  sweep(s, f, params);
  EXPECT_TRUE(converged(before, s, 1e-9));
}

TEST(Sweep, RejectsMismatchedField) {
  MessageState s = init_messages(LikelihoodField::from_log_ratio(Matrix::Zero(3, 3)), 1);
  EXPECT_THROW(sweep(s, LikelihoodField::from_log_ratio(Matrix::Zero(3, 4)), SolverParams{}), InvalidArgument);
}

TEST(ClipSchedule, RampsToBound) {
  SolverParams p;
  EXPECT_DOUBLE_EQ(clip_for_iteration(0, p), p.clamp_start);
  EXPECT_DOUBLE_EQ(clip_for_iteration(1, p), p.clamp_start * p.clamp_growth);
  EXPECT_DOUBLE_EQ(clip_for_iteration(100000, p), p.clamp_bound);
}

TEST(Converged, Examples) {
  const std::vector<Matrix> same{Matrix::Constant(2, 2, 3.0)};
  EXPECT_TRUE(converged(message_residual(same, same), 1e-3));
  EXPECT_FALSE(converged(message_residual({Matrix::Constant(1, 1, 1.0)}, {Matrix::Constant(1, 1, 1.1)}), 1e-3));
  EXPECT_TRUE(converged(message_residual({Matrix::Constant(1, 1, 100.0)}, {Matrix::Constant(1, 1, 100.05)}), 1e-3));
}

TEST(Converged, InfinityHandling) {
  const std::vector<Matrix> inf{Matrix::Constant(2, 1, -kInf)};
  const Residual both = message_residual(inf, inf);
  EXPECT_EQ(both.change, 0.0);
  EXPECT_TRUE(converged(both, 1e-3));  // absolute fallback with a zero reference
  const Residual moved = message_residual(inf, {Matrix::Constant(2, 1, -3.0)});
  EXPECT_TRUE(moved.diverged);
  EXPECT_FALSE(converged(moved, 1e-3));
}

TEST(Converged, DimensionMismatchThrows) {
  EXPECT_THROW(message_residual({Matrix::Zero(2, 2)}, {Matrix::Zero(2, 3)}), InvalidArgument);
  EXPECT_THROW(message_residual({Matrix::Zero(2, 2)}, {}), InvalidArgument);
}

MessageState scripted_state(const Matrix& row_msgs, const Matrix& col_msgs) {
  // One tile; beliefs are row sums of f_to_r and column sums of f_to_c.
  const LikelihoodField f = LikelihoodField::from_log_ratio(Matrix::Zero(row_msgs.rows(), row_msgs.cols()));
  MessageState s = init_messages(f, 1);
  s.f_to_r[0] = row_msgs;
  s.f_to_c[0] = col_msgs;
  return s;
}

TEST(Decode, ThresholdsBeliefs) {
  Matrix rows(2, 1);
  rows << 0.2, -0.1;
  const Matrix cols = Matrix::Constant(2, 1, 1.0);
  const MessageState s = scripted_state(rows, cols);
  const Tiling t = decode(s, LikelihoodField::from_log_ratio(Matrix::Constant(2, 1, 100.0)), 0.0);
  ASSERT_EQ(t.tile_count(), 1u);
  EXPECT_EQ(t.tiles[0].rows, (Indicator{1, 0}));
  EXPECT_EQ(row_beliefs(s)(0, 0), 0.2);
}

TEST(Decode, AllNegativeInfinityGivesEmptyTiling) {
  const MessageState s = scripted_state(Matrix::Constant(3, 3, -kInf), Matrix::Constant(3, 3, -kInf));
  EXPECT_EQ(decode(s, LikelihoodField::from_log_ratio(Matrix::Ones(3, 3)), 0.0).tile_count(), 0u);
}

TEST(Decode, FrozenValuesOverrideBeliefs) {
  MessageState s = scripted_state(Matrix::Constant(2, 2, -1.0), Matrix::Constant(2, 2, 1.0));
  s.row_frozen[0] = {1, 0};
  const Tiling t = decode(s, LikelihoodField::from_log_ratio(Matrix::Constant(2, 2, 50.0)), 0.0);
  ASSERT_EQ(t.tile_count(), 1u);
  EXPECT_EQ(t.tiles[0].rows, (Indicator{1, 0}));
}

TEST(Decimate, BatchesConfidentVariablesAndFallsBackToTheStrongest) {
  Matrix rows(3, 1);
  rows << 9.0, -0.5, 0.25;
  Matrix cols(3, 1);
  cols << 0.1, 0.1, 0.1;  // single column belief 0.3
  MessageState s = scripted_state(rows, cols);
  EXPECT_EQ(decimate(s, 5.0), 1u);  // only row 0 clears the margin
  EXPECT_EQ(s.row_frozen[0], (std::vector<std::int8_t>{1, 0, 0}));
  EXPECT_EQ(decimate(s, 5.0), 1u);  // none clears it: strongest free one
  EXPECT_EQ(s.row_frozen[0], (std::vector<std::int8_t>{1, -1, 0}));
  EXPECT_EQ(decimate(s, 5.0), 1u);
  EXPECT_EQ(s.col_frozen[0], (std::vector<std::int8_t>{1}));
  EXPECT_EQ(decimate(s, 5.0), 1u);
  EXPECT_EQ(decimate(s, 5.0), 0u);
}

TEST(ResolveOverlaps, NonOverlappingInputUnchanged) {
  const LikelihoodField f = LikelihoodField::from_log_ratio(planted(6, 6, {0, 1}, {0, 1}, 5.0, -1.0));
  Tiling t(6, 6);
  t.tiles.push_back(Tile::from_indices(6, 6, {0, 1}, {0, 1}));
  EXPECT_EQ(resolve_overlaps(t, f), t);
}

TEST(ResolveOverlaps, ContestedElementStaysWithStrongerTile) {
  // Tile A = rows{1,2} x cols{1,2} (0-based) with total 5.0 + strong; tile B
  // = row{2} x cols{2,3} with total 1.0. Both claim element (2,2) (1-based).
  Matrix lam = Matrix::Constant(4, 4, -0.1);
  lam(0, 0) = 10.0;
  lam(0, 1) = 10.0;
  lam(1, 0) = 10.0;
  lam(1, 1) = 5.0;
  lam(1, 2) = 1.0;
  const LikelihoodField f = LikelihoodField::from_log_ratio(lam);
  Tiling raw(4, 4);
  raw.tiles.push_back(Tile::from_indices(4, 4, {0, 1}, {0, 1}));
  raw.tiles.push_back(Tile::from_indices(4, 4, {1}, {1, 2}));
  const Tiling out = resolve_overlaps(raw, f);
  ASSERT_TRUE(check_nonoverlap(out));
  EXPECT_EQ(labels_from_tiling(out)(1, 1), 1);
}

TEST(ResolveOverlaps, NeverWorseThanDroppingContestedTiles) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.5, 2.0);
  std::bernoulli_distribution on(0.5);
  for (int trial = 0; trial < 500; ++trial) {
    Matrix lam(4, 4);
    for (Eigen::Index k = 0; k < lam.size(); ++k) lam.data()[k] = g(rng);
    const LikelihoodField f = LikelihoodField::from_log_ratio(lam);
    Tiling raw = Tiling::blank(4, 4, 1 + rng() % 3);
    for (Tile& tile : raw.tiles) {
      for (auto& r : tile.rows) r = on(rng);
      for (auto& c : tile.cols) c = on(rng);
    }
    const Tiling out = resolve_overlaps(raw, f);
    ASSERT_TRUE(check_nonoverlap(out));
    for (const Tile& tile : out.tiles) ASSERT_FALSE(tile.empty());

    const Eigen::MatrixXi count = coverage(raw);
    Tiling kept(4, 4);
    for (const Tile& tile : raw.tiles) {
      bool contested = false;
      for (std::size_t i : tile.row_indices()) {
        for (std::size_t j : tile.col_indices()) contested = contested || count(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 1;
      }
      if (!contested) kept.tiles.push_back(tile);
    }
    EXPECT_LE(mdl_cost(out, f), mdl_cost(prune_empty(kept), f) + 1e-9);
  }
}

TEST(RunSumProduct, ZeroTilesGivesEmptyTiling) {
  const SumProductResult r = run_sum_product(LikelihoodField::from_log_ratio(Matrix::Ones(3, 3)), 0, SolverParams{});
  EXPECT_EQ(r.tiling.tile_count(), 0u);
  EXPECT_TRUE(r.converged);
}

TEST(RunSumProduct, AllBackgroundGivesEmptyTiling) {
  const SumProductResult r = run_sum_product(LikelihoodField::from_log_ratio(Matrix::Constant(6, 6, -4.0)), 1, SolverParams{});
  EXPECT_EQ(r.tiling.tile_count(), 0u);
}

TEST(RunSumProduct, RecoversPlantedTile) {
  const LikelihoodField f = LikelihoodField::from_log_ratio(planted(10, 10, {1, 4, 7}, {0, 5, 9}, 4.0, -4.0));
  const SumProductResult r = run_sum_product(f, 1, SolverParams{});
  const Tiling oracle = brute_force_map(LikelihoodField::from_log_ratio(planted(3, 3, {0, 1, 2}, {0, 1, 2}, 4.0, -4.0)), 1);
  ASSERT_EQ(oracle.tile_count(), 1u);
  ASSERT_EQ(r.tiling.tile_count(), 1u);
  EXPECT_EQ(r.tiling.tiles[0].row_indices(), (std::vector<std::size_t>{1, 4, 7}));
  EXPECT_EQ(r.tiling.tiles[0].col_indices(), (std::vector<std::size_t>{0, 5, 9}));
  EXPECT_TRUE(r.converged);
}

TEST(RunSumProduct, NearOracleOnSmallFields) {
  std::mt19937_64 rng(10);
  int within = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Matrix lam(3, 3);
    for (Eigen::Index k = 0; k < lam.size(); ++k) lam.data()[k] = (rng() & 1) ? 2.0 : -2.0;
    const LikelihoodField f = LikelihoodField::from_log_ratio(lam);
    const std::size_t tiles = 1 + static_cast<std::size_t>(seed % 2);
    const double best = mdl_cost(brute_force_map(f, tiles), f);
    const double empty = mdl_cost(Tiling(3, 3), f);
    const double got = mdl_cost(run_sum_product(f, tiles, SolverParams{}).tiling, f);
    within += got <= best + 0.1 * std::abs(empty - best) + 1e-9 ? 1 : 0;
  }
  EXPECT_GE(within, 90);
}

TEST(RunSumProduct, DeterministicAndValid) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(-0.5, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix lam(9, 7);
    for (Eigen::Index k = 0; k < lam.size(); ++k) lam.data()[k] = g(rng);
    const LikelihoodField f = LikelihoodField::from_log_ratio(lam);
    const SumProductResult a = run_sum_product(f, 3, SolverParams{});
    const SumProductResult b = run_sum_product(f, 3, SolverParams{});
    EXPECT_EQ(a.tiling, b.tiling);
    EXPECT_EQ(a.residuals, b.residuals);
    EXPECT_TRUE(check_nonoverlap(a.tiling));
    for (const Tile& tile : a.tiling.tiles) EXPECT_FALSE(tile.empty());
  }
}

}  // namespace
}  // namespace mta
