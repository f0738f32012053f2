#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "erysegm/features.hpp"
#include "erysegm/homography.hpp"

namespace erysegm {

struct RansacParams {
  double inlier_px = 3.0;
  int max_iters = 2000;
  /// Adaptive stopping confidence; 1.0 (or more) disables early exit.
  double confidence = 0.999;
  std::uint64_t seed = 0;
};

struct RansacResult {
  Homography homography;         ///< DLT refit on all consensus inliers
  Homography consensus_model;    ///< minimal-sample model that won the vote
  std::vector<int> inliers;      ///< ascending correspondence indices
  int iterations = 0;            ///< scored hypotheses
  double rmse = 0.0;             ///< refit model's transfer RMSE over inliers
};

/// Seeded RANSAC over point correspondences (src -> dst). A hypothesis wins
/// on inlier count, then on lower summed squared error. Minimal samples with
/// a collinear triple are redrawn without counting as an iteration.
/// Throws InsufficientMatches (< 4 pairs) or NoConsensus (< 4 inliers).
RansacResult ransac_homography(std::span<const PointPair> pairs, const RansacParams& params);

/// Match-list form: the returned homography maps keypoints of `kp_b` onto
/// keypoints of `kp_a`, and inlier indices refer to `matches`.
RansacResult ransac_homography(std::span<const Match> matches, std::span<const Keypoint> kp_a,
                               std::span<const Keypoint> kp_b, const RansacParams& params);

/// Iterations needed to draw one all-inlier sample with `confidence`, given
/// an inlier ratio; saturates at `max_iters`.
int adaptive_iterations(double inlier_ratio, double confidence, int max_iters);

}  // namespace erysegm
