#pragma once

#include "erysegm/image.hpp"

namespace erysegm {

/// Mean squared difference of 8-bit samples over all pixels and channels.
/// Throws DimensionMismatch when sizes or channel counts differ.
double mse(const RasterImage& a, const RasterImage& b);

/// As above, restricted to pixels where `mask` is true. Throws EmptyMask when
/// the mask selects nothing.
double mse(const RasterImage& a, const RasterImage& b, const BinaryMask& mask);

/// Bilinear resize with pixel-centre alignment, rounding half up.
RasterImage resize_bilinear(const RasterImage& image, int width, int height);

}  // namespace erysegm
