#pragma once

#include <vector>

#include "erysegm/features.hpp"
#include "erysegm/homography.hpp"
#include "erysegm/image.hpp"
#include "erysegm/ransac.hpp"
#include "erysegm/warp.hpp"

namespace erysegm {

struct AlignParams {
  FeatureParams features;
  double ratio_max = 0.75;
  bool cross_check = true;
  RansacParams ransac;
  double crop_coverage = kDefaultCropCoverage;
};

/// Features of both images plus their filtered matches. Index "a" refers to
/// the original, "b" to the reference.
struct FeatureMatches {
  Features original;
  Features reference;
  std::vector<Match> matches;
};

struct AlignmentResult {
  Homography homography;          ///< reference -> original coordinates
  RasterImage warped_reference;   ///< on the original's pixel grid
  BinaryMask valid_mask;          ///< original-sized
  int inlier_count = 0;
  int match_count = 0;
  int keypoints_a = 0;            ///< original
  int keypoints_b = 0;            ///< reference
  double reprojection_rmse = 0.0;
  double mse_pre = 0.0;           ///< original vs naively resized reference
  double mse_post = 0.0;          ///< original vs warped reference in valid & crop
  Rect crop;
  RasterImage cropped_original;
  RasterImage cropped_reference;
  BinaryMask cropped_valid;
  std::vector<int> inliers;       ///< indices into the match list
};

/// Detect, describe and match. Throws AlignmentFailed when either image
/// yields no descriptors.
FeatureMatches match_images(const RasterImage& original, const RasterImage& reference,
                            const AlignParams& params = {});

/// RANSAC, warp and crop on an existing match list (which may contain
/// arbitrary extra outliers). Throws AlignmentFailed wrapping no-consensus.
AlignmentResult align_from_matches(const RasterImage& original, const RasterImage& reference,
                                   const FeatureMatches& features, const AlignParams& params = {});

/// Full registration of `reference` onto `original`.
AlignmentResult align(const RasterImage& original, const RasterImage& reference,
                      const AlignParams& params = {});

}  // namespace erysegm
