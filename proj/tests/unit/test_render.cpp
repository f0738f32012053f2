#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "erysegm/error.hpp"
#include "erysegm/render.hpp"
#include "fixtures.hpp"

using namespace erysegm;

namespace {

DeltaMap ramp(int n) {
  DeltaMap m;
  m.width = n;
  m.height = 1;
  for (int i = 0; i < n; ++i) m.delta_a.push_back(static_cast<float>(i - n / 2));
  m.domain = BinaryMask(n, 1, true);
  return m;
}

}  // namespace

TEST(Overlay, HandComputedPixel) {
  const RasterImage img = fixture::solid(2, 1, 100, 100, 100);
  BinaryMask m(2, 1);
  m.set(0, 0, true);
  const RasterImage out = render_overlay(img, m, {255, 0, 0}, 0.5);
  EXPECT_EQ(out.at(0, 0, 0), 178);
  EXPECT_EQ(out.at(0, 0, 1), 50);
  EXPECT_EQ(out.at(0, 0, 2), 50);
  EXPECT_EQ(out.at(1, 0, 0), 100);
}

TEST(Overlay, AlphaExtremesAndUnmaskedUntouched) {
  std::mt19937 rng(1);
  RasterImage img(16, 16);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng());
  BinaryMask m(16, 16);
  for (auto& b : m.bits()) b = rng() % 2;
  EXPECT_EQ(render_overlay(img, m, {1, 2, 3}, 0.0), img);
  const RasterImage full = render_overlay(img, m, {1, 2, 3}, 1.0);
  const RasterImage half = render_overlay(img, m, {9, 200, 30}, 0.45);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      if (m.at(x, y)) {
        EXPECT_EQ(full.at(x, y, 0), 1);
        EXPECT_EQ(full.at(x, y, 2), 3);
      } else {
        for (int c = 0; c < 3; ++c) EXPECT_EQ(half.at(x, y, c), img.at(x, y, c));
      }
    }
  }
  EXPECT_THROW(render_overlay(img, BinaryMask(3, 3), {0, 0, 0}, 0.5), Error);
}

TEST(Heatmap, ZeroWhiteEndsSaturatedOutsideGray) {
  DeltaMap m = ramp(11);  // -5 .. 5
  m.domain.set(0, 0, false);
  const RasterImage h = render_heatmap(m);
  const auto px = [&](int x) { return Rgb{h.at(x, 0, 0), h.at(x, 0, 1), h.at(x, 0, 2)}; };
  EXPECT_EQ(px(5), (Rgb{255, 255, 255}));
  EXPECT_EQ(px(10), (Rgb{255, 0, 0}));
  EXPECT_EQ(px(0), kOutsideDomainGray);
  EXPECT_EQ(px(1)[2], 255);
  EXPECT_LT(px(1)[0], 255);

  DeltaMap zero = ramp(4);
  for (float& v : zero.delta_a) v = 0;
  const RasterImage white = render_heatmap(zero);
  for (auto v : white.data()) EXPECT_EQ(v, 255);
}

TEST(Heatmap, Pointwise) {
  std::mt19937 rng(2);
  DeltaMap m = ramp(40);
  std::shuffle(m.delta_a.begin(), m.delta_a.end(), rng);
  const RasterImage h = render_heatmap(m);
  const RasterImage base = render_heatmap(ramp(40));
  // Each value renders the same colour wherever it sits.
  for (int x = 0; x < 40; ++x) {
    const int src = static_cast<int>(m.delta_a[static_cast<std::size_t>(x)]) + 20;
    for (int c = 0; c < 3; ++c) EXPECT_EQ(h.at(x, 0, c), base.at(src, 0, c));
  }
}

TEST(HistogramChart, Dimensions) {
  HistogramData hd;
  hd.bin_edges = {0, 1, 2, 3};
  hd.counts = {5, 0, 2};
  hd.mu = 1.0;
  hd.tau = 2.5;
  const RasterImage img = render_histogram(hd, 320, 200);
  EXPECT_EQ(img.width(), 320);
  EXPECT_EQ(img.height(), 200);
}
