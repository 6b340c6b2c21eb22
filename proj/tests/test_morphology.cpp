#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "support.hpp"
#include "tvplan/morphology.hpp"

using namespace tvplan;

namespace {

std::set<std::array<int, 3>> offset_set(const StructuringOffsets& se) {
  return {se.offsets.begin(), se.offsets.end()};
}

}  // namespace

TEST(StructuringOffsets, ZeroMarginIsCenterOnly) {
  const auto se = build_structuring_offsets(MarginVector(), {1.3, 0.7, 2.0});
  ASSERT_EQ(se.offsets.size(), 1u);
  EXPECT_EQ(se.offsets[0], (Index3{0, 0, 0}));
}

TEST(StructuringOffsets, UnitIsotropicMarginIsCross) {
  const auto se = build_structuring_offsets(MarginVector::isotropic(1.0), {1, 1, 1});
  const std::set<std::array<int, 3>> expected{{0, 0, 0},  {-1, 0, 0}, {1, 0, 0},
                                              {0, -1, 0}, {0, 1, 0},  {0, 0, -1},
                                              {0, 0, 1}};
  EXPECT_EQ(offset_set(se), expected);
}

TEST(StructuringOffsets, AsymmetricOneSided) {
  const auto se =
      build_structuring_offsets(MarginVector(2, 0, 0, 0, 0, 0), {1, 1, 1});
  const std::set<std::array<int, 3>> expected{{0, 0, 0}, {-1, 0, 0}, {-2, 0, 0}};
  EXPECT_EQ(offset_set(se), expected);
}

TEST(StructuringOffsets, MatchesBruteForceMembership) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_real_distribution<double> sp(0.5, 3.0);
    const std::array<double, 3> spacing{sp(rng), sp(rng), sp(rng)};
    const MarginVector m = support::random_margin(rng);
    const auto got = offset_set(build_structuring_offsets(m, spacing));
    const auto ref = oracles::brute_offsets(m, spacing);
    EXPECT_EQ(got, (std::set<std::array<int, 3>>(ref.begin(), ref.end())));
  }
}

TEST(Dilate, UnitMarginCrossAroundSingleVoxel) {
  const Grid g({5, 5, 5}, {1, 1, 1});
  const BinaryMask m(g, std::vector<Index3>{{2, 2, 2}});
  const BinaryMask d = dilate(m, MarginVector::isotropic(1.0));
  EXPECT_EQ(d.voxel_count(), 7u);
  EXPECT_TRUE(masks_equal(d, oracles::brute_dilate(m, MarginVector::isotropic(1.0))));
}

TEST(Dilate, ZeroMarginIsIdentity) {
  std::mt19937 rng(5);
  const Grid g = support::random_grid(rng, 16);
  const BinaryMask m = support::random_mask(rng, g, 0.2);
  EXPECT_TRUE(masks_equal(dilate(m, MarginVector()), m));
}

TEST(Dilate, AsymmetricSingleVoxel) {
  const Grid g({5, 5, 5}, {1, 1, 1});
  const BinaryMask m(g, std::vector<Index3>{{2, 2, 2}});
  const BinaryMask d = dilate(m, MarginVector(2, 0, 0, 0, 0, 0));
  const BinaryMask expected(
      g, std::vector<Index3>{{0, 2, 2}, {1, 2, 2}, {2, 2, 2}});
  EXPECT_TRUE(masks_equal(d, expected));
}

TEST(Dilate, ClipsAtBoundary) {
  const Grid g({3, 3, 3}, {1, 1, 1});
  const BinaryMask m(g, std::vector<Index3>{{0, 0, 0}});
  const BinaryMask d = dilate(m, MarginVector::isotropic(1.0));
  const BinaryMask expected(
      g, std::vector<Index3>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_TRUE(masks_equal(d, expected));
}

TEST(Dilate, MatchesBruteForceOracle) {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const Grid g = support::random_grid(rng);
    const bool dense = trial % 5 == 0;
    const BinaryMask m = support::random_mask(rng, g, dense ? 0.4 : 0.02);
    const MarginVector margin = support::random_margin(rng, dense ? 2.0 : 5.0);
    EXPECT_TRUE(masks_equal(dilate(m, margin), oracles::brute_dilate(m, margin)))
        << "trial " << trial << " grid " << g.describe();
  }
}

TEST(Dilate, ExtensiveAndMonotone) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    const Grid g = support::random_grid(rng, 20);
    const BinaryMask a = support::random_mask(rng, g, 0.05);
    const BinaryMask b = union_of(a, support::random_mask(rng, g, 0.05));
    const MarginVector m = support::random_margin(rng, 3.0);
    const BinaryMask da = dilate(a, m);
    const BinaryMask db = dilate(b, m);
    EXPECT_TRUE(a.is_subset_of(da));
    EXPECT_TRUE(da.is_subset_of(db));
  }
}

TEST(Dilate, DistributesOverUnion) {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const Grid g = support::random_grid(rng);
    const BinaryMask a = support::random_mask(rng, g, 0.03);
    const BinaryMask b = support::random_mask(rng, g, 0.03);
    const MarginVector m = support::random_margin(rng, 4.0);
    EXPECT_TRUE(masks_equal(dilate(union_of(a, b), m),
                            union_of(dilate(a, m), dilate(b, m))));
  }
}

TEST(Union, IdentityAndIdempotence) {
  std::mt19937 rng(41);
  const Grid g = support::random_grid(rng, 12);
  const BinaryMask a = support::random_mask(rng, g, 0.3);
  const BinaryMask empty(g);
  EXPECT_TRUE(masks_equal(union_of(a, empty), a));
  EXPECT_TRUE(masks_equal(union_of(a, a), a));
}

TEST(Union, DisjointCountsAdd) {
  const Grid g({4, 4, 4}, {1, 1, 1});
  const BinaryMask a(g, std::vector<Index3>{{0, 0, 0}});
  const BinaryMask b(g, std::vector<Index3>{{3, 3, 3}});
  EXPECT_EQ(union_of(a, b).voxel_count(), 2u);
}

TEST(Union, ErrorsOnEmptyListAndGridMismatch) {
  EXPECT_THROW(union_of({}), Error);
  const Grid g1({4, 4, 4}, {1, 1, 1});
  const Grid g2({4, 4, 4}, {2, 1, 1});
  const BinaryMask a(g1);
  const BinaryMask b(g2);
  EXPECT_THROW(union_of(a, b), GridMismatchError);
}

TEST(BooleanOps, SubtractBasics) {
  const Grid g({3, 3, 3}, {1, 1, 1});
  std::vector<Index3> all;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) all.push_back({i, j, k});
  const BinaryMask cube(g, all);
  const BinaryMask center(g, std::vector<Index3>{{1, 1, 1}});
  const BinaryMask empty(g);

  EXPECT_TRUE(masks_equal(subtract(cube, empty), cube));
  EXPECT_TRUE(subtract(cube, cube).empty());
  EXPECT_EQ(subtract(cube, center).voxel_count(), 26u);
}

TEST(BooleanOps, IntersectBasics) {
  const Grid g({4, 4, 4}, {1, 1, 1});
  const BinaryMask a(g, std::vector<Index3>{{0, 0, 0}, {1, 0, 0}});
  const BinaryMask b(g, std::vector<Index3>{{1, 0, 0}, {2, 0, 0}, {3, 0, 0}});
  const BinaryMask empty(g);
  EXPECT_TRUE(masks_equal(intersect(a, a), a));
  EXPECT_TRUE(intersect(a, empty).empty());
  EXPECT_EQ(intersect(a, b).voxel_count(), 1u);
}

TEST(BooleanOps, SubtractDisjointFromSubtrahend) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid g = support::random_grid(rng, 12);
    const BinaryMask a = support::random_mask(rng, g, 0.3);
    const BinaryMask b = support::random_mask(rng, g, 0.3);
    EXPECT_TRUE(intersect(subtract(a, b), b).empty());
  }
}

TEST(BooleanOps, CommutativeAssociativeIdempotent) {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    const Grid g = support::random_grid(rng, 10);
    const BinaryMask a = support::random_mask(rng, g, 0.3);
    const BinaryMask b = support::random_mask(rng, g, 0.3);
    const BinaryMask c = support::random_mask(rng, g, 0.3);
    EXPECT_TRUE(masks_equal(union_of(a, b), union_of(b, a)));
    EXPECT_TRUE(masks_equal(union_of(union_of(a, b), c), union_of(a, union_of(b, c))));
    EXPECT_TRUE(masks_equal(intersect(a, b), intersect(b, a)));
    EXPECT_TRUE(
        masks_equal(intersect(intersect(a, b), c), intersect(a, intersect(b, c))));
    EXPECT_TRUE(masks_equal(intersect(a, a), a));
  }
}

TEST(FillHoles, HollowShellBecomesSolid) {
  const Grid g({7, 7, 7}, {1, 1, 1});
  std::vector<Index3> shell;
  for (int k = 1; k <= 5; ++k) {
    for (int j = 1; j <= 5; ++j) {
      for (int i = 1; i <= 5; ++i) {
        if (i == 1 || i == 5 || j == 1 || j == 5 || k == 1 || k == 5) {
          shell.push_back({i, j, k});
        }
      }
    }
  }
  const BinaryMask m(g, shell);
  ASSERT_EQ(m.voxel_count(), 98u);
  const BinaryMask filled = fill_holes(m);
  EXPECT_EQ(filled.voxel_count(), 125u);
  EXPECT_TRUE(masks_equal(filled, oracles::brute_fill_holes(m)));
}

TEST(FillHoles, SolidAndEmptyUnchanged) {
  const Grid g({5, 5, 5}, {1, 1, 1});
  std::vector<Index3> block;
  for (int k = 1; k < 4; ++k)
    for (int j = 1; j < 4; ++j)
      for (int i = 1; i < 4; ++i) block.push_back({i, j, k});
  const BinaryMask solid(g, block);
  EXPECT_TRUE(masks_equal(fill_holes(solid), solid));
  const BinaryMask empty(g);
  EXPECT_TRUE(fill_holes(empty).empty());
}

TEST(FillHoles, MatchesOracleAndIdempotent) {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 15; ++trial) {
    const Grid g = support::random_grid(rng, 16);
    const BinaryMask m = support::random_mask(rng, g, 0.35);
    const BinaryMask f = fill_holes(m);
    EXPECT_TRUE(masks_equal(f, oracles::brute_fill_holes(m)));
    EXPECT_TRUE(masks_equal(fill_holes(f), f));
  }
}

TEST(Smooth, EmptyStaysEmpty) {
  const Grid g({6, 6, 6}, {1, 1, 1});
  EXPECT_TRUE(smooth(BinaryMask(g)).empty());
}

TEST(Smooth, SolidBlockMatchesOracle) {
  const Grid g({9, 9, 9}, {1, 1, 1});
  std::vector<Index3> block;
  for (int k = 2; k < 7; ++k)
    for (int j = 2; j < 7; ++j)
      for (int i = 2; i < 7; ++i) block.push_back({i, j, k});
  const BinaryMask m(g, block);
  const BinaryMask s = smooth(m);
  EXPECT_TRUE(masks_equal(s, oracles::brute_smooth(m)));
  // interior voxels survive
  EXPECT_TRUE(s.test(4, 4, 4));
  EXPECT_TRUE(s.test(3, 3, 3));
}

TEST(Smooth, RemovesIsolatedVoxel) {
  const Grid g({12, 12, 12}, {1, 1, 1});
  std::vector<Index3> v;
  for (int k = 1; k < 5; ++k)
    for (int j = 1; j < 5; ++j)
      for (int i = 1; i < 5; ++i) v.push_back({i, j, k});
  v.push_back({10, 10, 10});  // far from the block
  const BinaryMask m(g, v);
  const BinaryMask s = smooth(m);
  EXPECT_FALSE(s.test(10, 10, 10));
  EXPECT_TRUE(masks_equal(s, oracles::brute_smooth(m)));
}

TEST(Smooth, MatchesOracleAndIdempotent) {
  std::mt19937 rng(59);
  for (int trial = 0; trial < 15; ++trial) {
    const Grid g = support::random_grid(rng, 14);
    const BinaryMask m = trial % 2 == 0 ? support::random_mask(rng, g, 0.4)
                                        : support::random_blob_mask(rng, g);
    const BinaryMask s = smooth(m);
    EXPECT_TRUE(masks_equal(s, oracles::brute_smooth(m)));
    EXPECT_TRUE(masks_equal(smooth(s), s)) << "not idempotent, trial " << trial;
  }
}

TEST(Surface, SingleVoxelAndEmpty) {
  const Grid g({5, 5, 5}, {1, 1, 1});
  const BinaryMask single(g, std::vector<Index3>{{2, 2, 2}});
  EXPECT_TRUE(masks_equal(surface_voxels(single), single));
  EXPECT_TRUE(surface_voxels(BinaryMask(g)).empty());
}

TEST(Surface, SolidBlockSheds26) {
  const Grid g({5, 5, 5}, {1, 1, 1});
  std::vector<Index3> block;
  for (int k = 1; k < 4; ++k)
    for (int j = 1; j < 4; ++j)
      for (int i = 1; i < 4; ++i) block.push_back({i, j, k});
  const BinaryMask m(g, block);
  const BinaryMask s = surface_voxels(m);
  EXPECT_EQ(s.voxel_count(), 26u);
  EXPECT_FALSE(s.test(2, 2, 2));
  EXPECT_TRUE(masks_equal(s, oracles::brute_surface(m)));
}

TEST(Surface, GridFaceCountsAsBoundary) {
  const Grid g({3, 3, 3}, {1, 1, 1});
  std::vector<Index3> all;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) all.push_back({i, j, k});
  const BinaryMask full(g, all);
  const BinaryMask s = surface_voxels(full);
  EXPECT_EQ(s.voxel_count(), 26u);  // everything but the center voxel
  EXPECT_TRUE(masks_equal(s, oracles::brute_surface(full)));
}

TEST(TouchesBoundary, DetectsFaces) {
  const Grid g({4, 4, 4}, {1, 1, 1});
  EXPECT_FALSE(touches_boundary(BinaryMask(g, std::vector<Index3>{{1, 1, 1}})));
  EXPECT_TRUE(touches_boundary(BinaryMask(g, std::vector<Index3>{{0, 1, 1}})));
  EXPECT_TRUE(touches_boundary(BinaryMask(g, std::vector<Index3>{{1, 3, 1}})));
  EXPECT_TRUE(touches_boundary(BinaryMask(g, std::vector<Index3>{{1, 1, 3}})));
}
