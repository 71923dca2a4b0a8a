#include "mta/error.hpp"
#include "mta/synth.hpp"
#include "mta/tiling.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace mta {
namespace {

double area_of(const Tile& t) { return static_cast<double>(t.row_count() * t.col_count()); }

TEST(GenerateTiling, SingleTileArea) {
  const Tiling t = generate_tiling(40, 1, 0.04, 7);
  ASSERT_EQ(t.tile_count(), 1u);
  EXPECT_GE(area_of(t.tiles[0]), 0.75 * 64.0);
  EXPECT_LE(area_of(t.tiles[0]), 1.25 * 64.0);
}

TEST(GenerateTiling, ShapeContractAcrossSeeds) {
  for (std::size_t n : {40u, 70u, 100u}) {
    for (std::size_t tiles : {1u, 5u, 10u}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Tiling t = generate_tiling(n, tiles, 0.04, seed);
        ASSERT_EQ(t.tile_count(), tiles);
        EXPECT_TRUE(check_nonoverlap(t));
        const double target = 0.04 * static_cast<double>(n * n);
        double total = 0.0;
        for (const Tile& tile : t.tiles) {
          const double ratio = static_cast<double>(tile.row_count()) / static_cast<double>(tile.col_count());
          EXPECT_GE(ratio, 1.0 / 3.0 - 1e-12);
          EXPECT_LE(ratio, 3.0 + 1e-12);
          EXPECT_GE(area_of(tile), 0.75 * target);
          EXPECT_LE(area_of(tile), 1.25 * target);
          total += area_of(tile);
        }
        EXPECT_NEAR(total, static_cast<double>(tiles) * target, 0.25 * static_cast<double>(tiles) * target);
      }
    }
  }
}

TEST(GenerateTiling, Deterministic) {
  EXPECT_EQ(generate_tiling(50, 4, 0.04, 99), generate_tiling(50, 4, 0.04, 99));
  EXPECT_NE(generate_tiling(50, 4, 0.04, 99), generate_tiling(50, 4, 0.04, 100));
}

TEST(GenerateTiling, Errors) {
  EXPECT_THROW(generate_tiling(40, 1, 0.0, 1), InvalidArgument);
  EXPECT_THROW(generate_tiling(3, 1, 0.04, 1), InvalidArgument);
  EXPECT_THROW(generate_tiling(40, 20, 0.04, 1), InvalidArgument);
  EXPECT_EQ(generate_tiling(40, 0, 0.04, 1).tile_count(), 0u);
  // Target area 0.25: no integer shape lands within 25% of it.
  EXPECT_THROW(generate_tiling(5, 1, 0.01, 1), GenerationError);
}

TEST(RenderMatrix, Examples) {
  EXPECT_EQ(render_matrix(Tiling(3, 2), 1.0, -2.0).values(), Matrix::Constant(3, 2, -2.0));
  Tiling t(2, 2);
  t.tiles.push_back(Tile::from_indices(2, 2, {0}, {0, 1}));
  Matrix want(2, 2);
  want << 1, 1, 0, 0;
  EXPECT_EQ(render_matrix(t).values(), want);
  Tiling bad(2, 2);
  bad.tiles.push_back(Tile::from_indices(2, 2, {0}, {0}));
  bad.tiles.push_back(Tile::from_indices(2, 2, {0}, {0}));
  EXPECT_THROW(render_matrix(bad), OverlapError);
}

TEST(RenderMatrix, CountMatchesTileAreas) {
  const Tiling t = generate_tiling(60, 6, 0.04, 3);
  const Matrix m = render_matrix(t, 5.0, 0.0).values();
  double expected = 0.0;
  for (const Tile& tile : t.tiles) expected += area_of(tile);
  EXPECT_EQ(static_cast<double>((m.array() == 5.0).count()), expected);
}

TEST(Noise, ZeroSigmaIsIdentity) {
  const DataMatrix clean = render_matrix(generate_tiling(20, 2, 0.04, 1));
  EXPECT_EQ(add_gaussian_noise(clean, 0.0, 5).values(), clean.values());
  EXPECT_THROW(add_gaussian_noise(clean, -0.1, 5), InvalidArgument);
}

TEST(Noise, SigmaFromLogVariance) {
  EXPECT_NEAR(sigma_from_log_variance(-1.5), 0.17783, 5e-6);
  EXPECT_NEAR(sigma_from_log_variance(-1.5), std::pow(10.0, -0.75), 1e-15);
}

TEST(Noise, EmpiricalVariance) {
  const DataMatrix clean(Matrix::Zero(200, 200));
  const double sigma = sigma_from_log_variance(-0.8);
  const Matrix d = add_gaussian_noise(clean, sigma, 17).values();
  const double mean = d.mean();
  const double var = (d.array() - mean).square().sum() / static_cast<double>(d.size() - 1);
  EXPECT_NEAR(var, sigma * sigma, 0.1 * sigma * sigma);
}

TEST(GroundTruth, ConsistentAndDeterministic) {
  const GroundTruth a = make_ground_truth(40, 3, -1.0, 123);
  const GroundTruth b = make_ground_truth(40, 3, -1.0, 123);
  EXPECT_EQ(a.tiling, b.tiling);
  EXPECT_EQ(a.noisy.values(), b.noisy.values());
  EXPECT_EQ(a.clean.values(), render_matrix(a.tiling).values());
  const Matrix d = a.noisy.values() - a.clean.values();
  const double var = (d.array() - d.mean()).square().sum() / static_cast<double>(d.size() - 1);
  EXPECT_NEAR(var, a.sigma * a.sigma, 0.2 * a.sigma * a.sigma);
  EXPECT_EQ(a.seed, 123u);
}

}  // namespace
}  // namespace mta
