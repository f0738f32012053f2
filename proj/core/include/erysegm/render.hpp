#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include "erysegm/erythema.hpp"
#include "erysegm/image.hpp"

namespace erysegm {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kOutsideDomainGray{128, 128, 128};

/// Diverging blue-white-red rendering of a delta map. Zero is white, `hi`
/// is pure red, `lo` pure blue. Without an explicit scale the range is the
/// symmetric max |delta| over the domain. Pixels outside the domain are gray.
RasterImage render_heatmap(const DeltaMap& map,
                           std::optional<std::pair<double, double>> scale = std::nullopt);

/// (1 - alpha) * original + alpha * color on masked pixels, rounded half up;
/// other pixels are copied unchanged. Throws DimensionMismatch.
RasterImage render_overlay(const RasterImage& original, const BinaryMask& mask, Rgb color,
                           double alpha);

/// Bar chart of the histogram with vertical markers at mu (blue) and
/// tau (red).
RasterImage render_histogram(const HistogramData& hist, int width = 640, int height = 360);

}  // namespace erysegm
