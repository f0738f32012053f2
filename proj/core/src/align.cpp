#include "erysegm/align.hpp"

#include <string>

#include "erysegm/color.hpp"
#include "erysegm/error.hpp"
#include "erysegm/metrics.hpp"

namespace erysegm {

FeatureMatches match_images(const RasterImage& original, const RasterImage& reference,
                            const AlignParams& params) {
  FeatureMatches out;
  try {
    out.original = extract_features(to_grayscale(original), params.features);
    out.reference = extract_features(to_grayscale(reference), params.features);
    out.matches = match_descriptors(out.original.descriptors, out.reference.descriptors,
                                    params.ratio_max, params.cross_check);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::EmptyDescriptorList || e.kind() == ErrorKind::ImageTooSmall) {
      throw Error(ErrorKind::AlignmentFailed, e.what());
    }
    throw;
  }
  return out;
}

AlignmentResult align_from_matches(const RasterImage& original, const RasterImage& reference,
                                   const FeatureMatches& features, const AlignParams& params) {
  AlignmentResult result;
  result.keypoints_a = static_cast<int>(features.original.keypoints.size());
  result.keypoints_b = static_cast<int>(features.reference.keypoints.size());
  result.match_count = static_cast<int>(features.matches.size());

  RansacResult fit;
  try {
    fit = ransac_homography(features.matches, features.original.keypoints,
                            features.reference.keypoints, params.ransac);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NoConsensus || e.kind() == ErrorKind::InsufficientMatches) {
      throw Error(ErrorKind::AlignmentFailed, e.what());
    }
    throw;
  }
  result.homography = fit.homography;
  result.inliers = fit.inliers;
  result.inlier_count = static_cast<int>(fit.inliers.size());
  result.reprojection_rmse = fit.rmse;

  WarpResult warped;
  try {
    warped = warp_to(reference, fit.homography, original.width(), original.height());
  } catch (const Error& e) {
    throw Error(ErrorKind::AlignmentFailed, e.what());
  }
  result.warped_reference = std::move(warped.image);
  result.valid_mask = std::move(warped.valid);

  CropResult crop;
  try {
    crop = central_crop(original, result.warped_reference, result.valid_mask,
                        params.crop_coverage);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NoValidOverlap) throw Error(ErrorKind::AlignmentFailed, e.what());
    throw;
  }
  result.crop = crop.rect;
  result.cropped_original = std::move(crop.original);
  result.cropped_reference = std::move(crop.warped);
  result.cropped_valid = std::move(crop.valid);

  result.mse_pre = mse(original, resize_bilinear(reference, original.width(), original.height()));
  result.mse_post = mse(result.cropped_original, result.cropped_reference, result.cropped_valid);
  return result;
}

AlignmentResult align(const RasterImage& original, const RasterImage& reference,
                      const AlignParams& params) {
  const FeatureMatches features = match_images(original, reference, params);
  return align_from_matches(original, reference, features, params);
}

}  // namespace erysegm
