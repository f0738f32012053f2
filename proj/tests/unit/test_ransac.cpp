#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "erysegm/error.hpp"
#include "erysegm/ransac.hpp"

using namespace erysegm;

namespace {

std::vector<PointPair> translated(std::mt19937_64& rng, int n, double tx, double ty) {
  std::uniform_real_distribution<double> pos(0, 500);
  std::vector<PointPair> p;
  for (int i = 0; i < n; ++i) {
    const Vec2 s{pos(rng), pos(rng)};
    p.push_back({s, {s.x + tx, s.y + ty}});
  }
  return p;
}

}  // namespace

TEST(Ransac, AllInliersExact) {
  std::mt19937_64 rng(1);
  const Homography truth({1.05, 0.02, 12, -0.03, 0.97, -4, 1e-5, -2e-5, 1});
  std::uniform_real_distribution<double> pos(0, 500);
  std::vector<PointPair> p;
  for (int i = 0; i < 60; ++i) {
    const Vec2 s{pos(rng), pos(rng)};
    p.push_back({s, truth.apply(s)});
  }
  const RansacResult r = ransac_homography(p, {});
  EXPECT_EQ(r.inliers.size(), p.size());
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(r.homography.matrix()[i], truth.matrix()[i], 1e-6);
}

TEST(Ransac, TranslationWithThirtyPercentOutliers) {
  std::mt19937_64 rng(2);
  auto p = translated(rng, 70, 17.0, -9.0);
  std::uniform_real_distribution<double> pos(0, 500);
  for (int i = 0; i < 30; ++i) p.push_back({{pos(rng), pos(rng)}, {pos(rng), pos(rng)}});
  const RansacResult r = ransac_homography(p, {});
  const Vec2 c = r.homography.apply(Vec2{250, 250});
  EXPECT_NEAR(c.x, 267.0, 0.5);
  EXPECT_NEAR(c.y, 241.0, 0.5);
  for (int i = 0; i < 70; ++i) {
    EXPECT_TRUE(std::binary_search(r.inliers.begin(), r.inliers.end(), i)) << i;
  }
}

TEST(Ransac, DeterministicForSeed) {
  std::mt19937_64 rng(5);
  auto p = translated(rng, 40, 3, 4);
  std::uniform_real_distribution<double> pos(0, 500);
  for (int i = 0; i < 40; ++i) p.push_back({{pos(rng), pos(rng)}, {pos(rng), pos(rng)}});
  RansacParams params;
  params.seed = 99;
  const RansacResult a = ransac_homography(p, params);
  const RansacResult b = ransac_homography(p, params);
  EXPECT_EQ(a.homography.matrix(), b.homography.matrix());
  EXPECT_EQ(a.inliers, b.inliers);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Ransac, InlierConsistency) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> noise(0.0, 0.8);
  std::uniform_real_distribution<double> pos(0, 500);
  const Homography truth({0.98, 0.05, 20, -0.04, 1.01, 8, 2e-5, 1e-5, 1});
  std::vector<PointPair> p;
  for (int i = 0; i < 120; ++i) {
    const Vec2 s{pos(rng), pos(rng)};
    Vec2 d = truth.apply(s);
    p.push_back({s, {d.x + noise(rng), d.y + noise(rng)}});
  }
  for (int i = 0; i < 50; ++i) p.push_back({{pos(rng), pos(rng)}, {pos(rng), pos(rng)}});
  const RansacParams params;
  const RansacResult r = ransac_homography(p, params);
  for (int i : r.inliers) {
    EXPECT_LE(transfer_error(r.consensus_model, p[static_cast<std::size_t>(i)]), params.inlier_px);
  }
  EXPECT_LE(r.rmse, params.inlier_px * 1.5);
  EXPECT_TRUE(std::is_sorted(r.inliers.begin(), r.inliers.end()));
}

TEST(Ransac, Errors) {
  std::mt19937_64 rng(7);
  const auto three = translated(rng, 3, 1, 1);
  try {
    ransac_homography(three, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientMatches);
  }
}

TEST(Ransac, AdaptiveIterations) {
  EXPECT_EQ(adaptive_iterations(1.0, 0.999, 2000), 1);
  EXPECT_EQ(adaptive_iterations(0.0, 0.999, 2000), 2000);
  // log(0.001) / log(1 - 0.5^4) = 107.04...
  EXPECT_EQ(adaptive_iterations(0.5, 0.999, 2000), 108);
  EXPECT_LE(adaptive_iterations(0.7, 0.999, 2000), adaptive_iterations(0.5, 0.999, 2000));
}

TEST(Ransac, MatchOverloadMapsBOntoA) {
  std::vector<Keypoint> a;
  std::vector<Keypoint> b;
  std::vector<Match> m;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<float> pos(0, 400);
  for (int i = 0; i < 30; ++i) {
    Keypoint kb;
    kb.x = pos(rng);
    kb.y = pos(rng);
    Keypoint ka = kb;
    ka.x += 10;
    a.push_back(ka);
    b.push_back(kb);
    m.push_back({i, i, 0, 0});
  }
  const RansacResult r = ransac_homography(m, a, b, {});
  EXPECT_NEAR(r.homography.apply(Vec2{0, 0}).x, 10.0, 1e-3);
}
