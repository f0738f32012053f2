#pragma once

#include <cstddef>
#include <vector>

#include "erysegm/image.hpp"

namespace erysegm {

// Pixelwise boolean algebra. Binary forms throw DimensionMismatch on size
// disagreement.
BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_not(const BinaryMask& a);

/// True when every set pixel of `a` is also set in `b`.
bool is_subset(const BinaryMask& a, const BinaryMask& b);

// Morphology with a Euclidean disc (offsets with dx^2 + dy^2 <= r^2).
// Pixels beyond the image take the value that leaves them neutral for the
// composite operator: true while opening, false while closing. Both are then
// idempotent and open(m) <= m <= close(m).
BinaryMask morph_erode(const BinaryMask& mask, int radius, bool outside = true);
BinaryMask morph_dilate(const BinaryMask& mask, int radius, bool outside = false);
BinaryMask morph_open(const BinaryMask& mask, int radius);
BinaryMask morph_close(const BinaryMask& mask, int radius);

/// Sub-mask; throws OutOfBounds if `rect` leaves the mask or is empty.
BinaryMask crop_mask(const BinaryMask& mask, const Rect& rect);

struct Components {
  std::vector<int> labels;         ///< 0 = background, 1..n component ids
  std::vector<std::size_t> areas;  ///< areas[id - 1]
};

/// 8-connected component labelling in raster-scan discovery order.
Components label_components(const BinaryMask& mask);

/// Drops 8-connected components with fewer than `min_area` pixels.
BinaryMask remove_small_components(const BinaryMask& mask, std::size_t min_area);

}  // namespace erysegm
