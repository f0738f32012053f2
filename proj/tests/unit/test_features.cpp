#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "erysegm/color.hpp"
#include "erysegm/error.hpp"
#include "erysegm/features.hpp"
#include "fixtures.hpp"

using namespace erysegm;

namespace {

GrayImage gray(const RasterImage& img) { return to_grayscale(img); }

bool near_any(const std::vector<Keypoint>& kps, double x, double y, double tol) {
  return std::any_of(kps.begin(), kps.end(),
                     [&](const Keypoint& k) { return std::hypot(k.x - x, k.y - y) <= tol; });
}

Descriptor random_descriptor(std::mt19937_64& rng) {
  Descriptor d;
  for (auto& w : d.bits) w = rng();
  return d;
}

// 90-degree clockwise rotation: (x, y) -> (h - 1 - y, x).
RasterImage rotate90(const RasterImage& img) {
  RasterImage out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) out.at(img.height() - 1 - y, x, c) = img.at(x, y, c);
    }
  }
  return out;
}

}  // namespace

TEST(Detect, ConstantImageHasNoCorners) {
  EXPECT_TRUE(detect_keypoints(gray(fixture::solid(80, 80, 90, 90, 90)), 100).empty());
}

TEST(Detect, SquareCorners) {
  RasterImage img = fixture::solid(100, 100, 20, 20, 20);
  for (int y = 30; y < 70; ++y) {
    for (int x = 30; x < 70; ++x) img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = 230;
  }
  const auto kps = detect_keypoints(gray(img), 50);
  for (const double cx : {29.5, 69.5}) {
    for (const double cy : {29.5, 69.5}) {
      EXPECT_TRUE(near_any(kps, cx, cy, 2.0)) << cx << "," << cy;
    }
  }
}

TEST(Detect, CheckerboardSaddles) {
  const int cell = 32;
  const int border = 32;
  const auto kps = detect_keypoints(gray(fixture::checkerboard(8, cell, border)), 500);
  int found = 0;
  for (int i = 1; i < 8; ++i) {
    for (int j = 1; j < 8; ++j) {
      found += near_any(kps, border + i * cell - 0.5, border + j * cell - 0.5, 2.0);
    }
  }
  EXPECT_GE(found, 40);
}

TEST(Detect, SortedBoundedAndInsideMargin) {
  const RasterImage img = fixture::Texture(200, 160, 3).view();
  const auto kps = detect_keypoints(gray(img), 120);
  ASSERT_FALSE(kps.empty());
  EXPECT_LE(kps.size(), 120u);
  for (std::size_t i = 1; i < kps.size(); ++i) EXPECT_GE(kps[i - 1].score, kps[i].score);
  for (const auto& k : kps) {
    EXPECT_GE(k.x, kKeypointMargin - 1);
    EXPECT_LE(k.x, 200 - kKeypointMargin);
    EXPECT_GE(k.orientation, 0.0f);
    EXPECT_LT(k.orientation, 2 * M_PI);
  }
}

TEST(Detect, TooSmall) {
  try {
    detect_keypoints(GrayImage(20, 20), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ImageTooSmall);
  }
}

TEST(Describe, DeterministicAndCopyInvariant) {
  const RasterImage img = fixture::Texture(160, 160, 5).view();
  const GrayImage g = gray(img);
  const auto kps = detect_keypoints(g, 80);
  const DescriptorSet a = compute_descriptors(g, kps);
  const DescriptorSet b = compute_descriptors(gray(img), kps);
  ASSERT_EQ(a.descriptors.size(), b.descriptors.size());
  for (std::size_t i = 0; i < a.descriptors.size(); ++i) {
    EXPECT_EQ(a.descriptors[i].distance(b.descriptors[i]), 0);
  }
}

TEST(Describe, RotationCompensated) {
  const RasterImage img = fixture::Texture(240, 240, 17).view();
  const RasterImage rot = rotate90(img);
  const GrayImage g0 = gray(img);
  const GrayImage g1 = gray(rot);
  std::vector<Keypoint> k0 = detect_keypoints(g0, 150);
  std::vector<Keypoint> k1;
  for (const auto& k : k0) {
    Keypoint r = k;
    r.x = static_cast<float>(img.height() - 1 - k.y);
    r.y = k.x;
    k1.push_back(r);
  }
  assign_orientations(g1, k1);
  const DescriptorSet d0 = compute_descriptors(g0, k0);
  const DescriptorSet d1 = compute_descriptors(g1, k1);
  ASSERT_EQ(d0.keypoint_index, d1.keypoint_index);
  ASSERT_GT(d0.descriptors.size(), 30u);
  std::vector<int> dist;
  for (std::size_t i = 0; i < d0.descriptors.size(); ++i) {
    dist.push_back(d0.descriptors[i].distance(d1.descriptors[i]));
  }
  std::sort(dist.begin(), dist.end());
  EXPECT_LE(dist[dist.size() / 2], 64);
  const auto within = std::count_if(dist.begin(), dist.end(), [](int d) { return d <= 64; });
  EXPECT_GE(static_cast<double>(within) / dist.size(), 0.8);
}

TEST(Match, IdentityOnDistinctSet) {
  std::mt19937_64 rng(1);
  std::vector<Descriptor> a;
  for (int i = 0; i < 40; ++i) a.push_back(random_descriptor(rng));
  const auto m = match_descriptors(a, a);
  ASSERT_EQ(m.size(), a.size());
  for (const auto& x : m) {
    EXPECT_EQ(x.index_a, x.index_b);
    EXPECT_EQ(x.distance, 0);
  }
}

TEST(Match, SingleCandidateSkipsRatio) {
  std::mt19937_64 rng(2);
  const std::vector<Descriptor> a{random_descriptor(rng)};
  const std::vector<Descriptor> b{random_descriptor(rng)};
  const auto m = match_descriptors(a, b, 0.1);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].ratio, 0.0f);
}

TEST(Match, PlantedDuplicatesSurvive) {
  std::mt19937_64 rng(3);
  std::vector<Descriptor> a;
  std::vector<Descriptor> b;
  for (int i = 0; i < 100; ++i) a.push_back(random_descriptor(rng));
  for (int i = 0; i < 100; ++i) b.push_back(random_descriptor(rng));
  std::vector<std::pair<int, int>> planted;
  for (int i = 0; i < 20; ++i) {
    const int ia = i * 5;
    const int ib = 99 - i * 3;
    b[static_cast<std::size_t>(ib)] = a[static_cast<std::size_t>(ia)];
    planted.emplace_back(ia, ib);
  }
  // Brute-force oracle: for each planted pair no other entry is as close.
  for (auto [ia, ib] : planted) {
    for (int j = 0; j < 100; ++j) {
      if (j != ib) EXPECT_GT(a[ia].distance(b[j]), 0);
    }
  }
  auto m = match_descriptors(a, b);
  std::vector<std::pair<int, int>> got;
  for (const auto& x : m) got.emplace_back(x.index_a, x.index_b);
  std::sort(got.begin(), got.end());
  std::sort(planted.begin(), planted.end());
  EXPECT_EQ(got, planted);
}

TEST(Match, EmptyListRaises) {
  std::mt19937_64 rng(4);
  const std::vector<Descriptor> a{random_descriptor(rng)};
  try {
    match_descriptors(a, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyDescriptorList);
  }
}

TEST(Extract, PyramidCoordinatesInBaseFrame) {
  const RasterImage img = fixture::Texture(300, 300, 8).view();
  const Features f = extract_features(gray(img), {});
  ASSERT_EQ(f.keypoints.size(), f.descriptors.size());
  ASSERT_GT(f.keypoints.size(), 100u);
  bool upper = false;
  for (const auto& k : f.keypoints) {
    EXPECT_GE(k.x, 0.0f);
    EXPECT_LT(k.x, 300.0f);
    upper = upper || k.octave > 0;
  }
  EXPECT_TRUE(upper);
}
