#include <gtest/gtest.h>

#include <random>

#include "erysegm/error.hpp"
#include "erysegm/metrics.hpp"

using namespace erysegm;

TEST(Mse, HandComputed) {
  RasterImage a(1, 1);
  RasterImage b(1, 1);
  b.at(0, 0, 0) = 3;
  EXPECT_DOUBLE_EQ(mse(a, b), 3.0);
  EXPECT_DOUBLE_EQ(mse(a, a), 0.0);
}

TEST(Mse, SymmetricNonNegativeAndMasked) {
  std::mt19937 rng(5);
  RasterImage a(8, 8);
  RasterImage b(8, 8);
  for (auto& v : a.data()) v = static_cast<std::uint8_t>(rng());
  for (auto& v : b.data()) v = static_cast<std::uint8_t>(rng());
  EXPECT_DOUBLE_EQ(mse(a, b), mse(b, a));
  EXPECT_GT(mse(a, b), 0.0);
  EXPECT_DOUBLE_EQ(mse(a, b, BinaryMask(8, 8, true)), mse(a, b));
  EXPECT_THROW(mse(a, b, BinaryMask(8, 8, false)), Error);

  // Identical where masked -> zero.
  BinaryMask m(8, 8);
  m.set(2, 3, true);
  for (int c = 0; c < 3; ++c) b.at(2, 3, c) = a.at(2, 3, c);
  EXPECT_DOUBLE_EQ(mse(a, b, m), 0.0);
}

TEST(Mse, DimensionMismatch) {
  try {
    mse(RasterImage(2, 2), RasterImage(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Resize, IdentityAndConstant) {
  std::mt19937 rng(9);
  RasterImage a(5, 4);
  for (auto& v : a.data()) v = static_cast<std::uint8_t>(rng());
  EXPECT_EQ(resize_bilinear(a, 5, 4), a);
  RasterImage c(3, 3);
  for (auto& v : c.data()) v = 90;
  const RasterImage up = resize_bilinear(c, 7, 11);
  for (auto v : up.data()) EXPECT_EQ(v, 90);
}
