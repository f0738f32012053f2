#pragma once

#include "erysegm/homography.hpp"
#include "erysegm/image.hpp"

namespace erysegm {

struct WarpResult {
  RasterImage image;
  BinaryMask valid;  ///< true where the source was sampled with full support
};

/// Inverse-mapped bilinear warp: output pixel p samples `source` at h^-1 p,
/// where `h` maps source coordinates to output coordinates. Unsupported
/// pixels are filled with 0 and flagged false in `valid`. Throws
/// SingularHomography.
WarpResult warp_to(const RasterImage& source, const Homography& h, int out_width, int out_height);

/// Copies a rectangle out of an image; throws OutOfBounds.
RasterImage crop_image(const RasterImage& image, const Rect& rect);

struct CropResult {
  RasterImage original;
  RasterImage warped;
  BinaryMask valid;
  Rect rect;
  double coverage = 0.0;  ///< fraction of `rect` that is valid
};

inline constexpr double kDefaultCropCoverage = 0.999;

/// Largest centred rectangle (equal margins on opposite sides) whose valid
/// fraction is at least `min_coverage`; ties keep the wider rectangle.
/// Throws DimensionMismatch or NoValidOverlap.
Rect central_crop_rect(const BinaryMask& valid, double min_coverage = kDefaultCropCoverage);

CropResult central_crop(const RasterImage& original, const RasterImage& warped,
                        const BinaryMask& valid, double min_coverage = kDefaultCropCoverage);

}  // namespace erysegm
