#include <gtest/gtest.h>

#include <random>

#include "erysegm/error.hpp"
#include "erysegm/mask.hpp"
#include "oracles.hpp"

using namespace erysegm;

namespace {

BinaryMask random_mask(std::mt19937& rng, int w, int h, double p) {
  BinaryMask m(w, h);
  std::bernoulli_distribution d(p);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m.set(x, y, d(rng));
  }
  return m;
}

}  // namespace

TEST(MaskAlgebra, Laws) {
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    const BinaryMask a = random_mask(rng, 13, 9, 0.5);
    const BinaryMask b = random_mask(rng, 13, 9, 0.3);
    EXPECT_EQ(mask_and(a, BinaryMask(13, 9, true)), a);
    EXPECT_EQ(mask_and(a, mask_not(a)).count(), 0u);
    EXPECT_EQ(mask_not(mask_and(a, b)), mask_or(mask_not(a), mask_not(b)));
    EXPECT_TRUE(is_subset(mask_and(a, b), a));
  }
  EXPECT_THROW(mask_and(BinaryMask(2, 2), BinaryMask(3, 2)), Error);
}

TEST(Morphology, RadiusZeroIsIdentity) {
  std::mt19937 rng(1);
  const BinaryMask m = random_mask(rng, 20, 17, 0.4);
  EXPECT_EQ(morph_open(m, 0), m);
  EXPECT_EQ(morph_close(m, 0), m);
}

TEST(Morphology, IsolatedPixelOpensAway) {
  BinaryMask m(9, 9);
  m.set(4, 4, true);
  EXPECT_EQ(morph_open(m, 1).count(), 0u);
}

TEST(Morphology, CloseFillsPinhole) {
  BinaryMask m(30, 30);
  for (int y = 5; y < 25; ++y) {
    for (int x = 5; x < 25; ++x) m.set(x, y, true);
  }
  BinaryMask hole = m;
  hole.set(14, 12, false);
  const BinaryMask closed = morph_close(hole, 1);
  EXPECT_EQ(closed, m);
  EXPECT_EQ(closed, oracle::erode(oracle::dilate(hole, 1, false), 1, false));
}

TEST(Morphology, MatchesBruteForce) {
  std::mt19937 rng(21);
  for (int r = 1; r <= 4; ++r) {
    const BinaryMask m = random_mask(rng, 37, 23, 0.55);
    EXPECT_EQ(morph_erode(m, r, true), oracle::erode(m, r, true)) << r;
    EXPECT_EQ(morph_erode(m, r, false), oracle::erode(m, r, false)) << r;
    EXPECT_EQ(morph_dilate(m, r, false), oracle::dilate(m, r, false)) << r;
    EXPECT_EQ(morph_dilate(m, r, true), oracle::dilate(m, r, true)) << r;
  }
}

TEST(Morphology, OrderingAndIdempotence) {
  std::mt19937 rng(4);
  for (int i = 0; i < 30; ++i) {
    const BinaryMask m = random_mask(rng, 31, 29, 0.2 + 0.02 * i);
    for (int r : {1, 2, 3}) {
      const BinaryMask o = morph_open(m, r);
      const BinaryMask c = morph_close(m, r);
      EXPECT_TRUE(is_subset(o, m));
      EXPECT_TRUE(is_subset(m, c));
      EXPECT_EQ(morph_open(o, r), o);
      EXPECT_EQ(morph_close(c, r), c);
      EXPECT_EQ(o.width(), m.width());
      EXPECT_EQ(c.height(), m.height());
    }
  }
}

TEST(CropMask, Cases) {
  std::mt19937 rng(2);
  const BinaryMask m = random_mask(rng, 6, 5, 0.5);
  EXPECT_EQ(crop_mask(m, {0, 0, 6, 5}), m);
  const BinaryMask one = crop_mask(m, {4, 3, 1, 1});
  EXPECT_EQ(one.width(), 1);
  EXPECT_EQ(one.at(0, 0), m.at(4, 3));
  EXPECT_THROW(crop_mask(m, {3, 3, 4, 1}), Error);
  EXPECT_THROW(crop_mask(m, {0, 0, 0, 1}), Error);
}

TEST(Components, MatchFloodFill) {
  std::mt19937 rng(8);
  for (int i = 0; i < 20; ++i) {
    const BinaryMask m = random_mask(rng, 40, 30, 0.45);
    const Components cc = label_components(m);
    const auto sizes = oracle::component_size_map(m);
    for (std::size_t p = 0; p < m.size(); ++p) {
      if (!m[p]) {
        EXPECT_EQ(cc.labels[p], 0);
        continue;
      }
      ASSERT_GT(cc.labels[p], 0);
      EXPECT_EQ(cc.areas[static_cast<std::size_t>(cc.labels[p] - 1)], sizes[p]);
    }
    for (std::size_t min_area : {2u, 5u, 30u}) {
      const BinaryMask kept = remove_small_components(m, min_area);
      for (std::size_t p = 0; p < m.size(); ++p) {
        EXPECT_EQ(kept[p], m[p] && sizes[p] >= min_area);
      }
    }
  }
}

TEST(Components, DiagonalIsConnected) {
  BinaryMask m(3, 3);
  m.set(0, 0, true);
  m.set(1, 1, true);
  m.set(2, 2, true);
  EXPECT_EQ(label_components(m).areas.size(), 1u);
}
