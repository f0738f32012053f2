#pragma once

#include <cstdint>

#include "erysegm/image.hpp"

namespace erysegm {

/// BT.601 luma weights used for the detector's luminance input.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

/// D65 reference white (Y normalised to 1).
inline constexpr double kWhiteX = 0.95047;
inline constexpr double kWhiteY = 1.0;
inline constexpr double kWhiteZ = 1.08883;

struct Lab {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Luma in [0, 255].
GrayImage to_grayscale(const RasterImage& image);

/// sRGB-encoded 8-bit triple to CIELAB (D65).
Lab srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// sRGB-encoded normalised triple (each in [0, 1]) to CIELAB (D65).
Lab srgb_to_lab(double r, double g, double b);

/// Per-pixel CIELAB conversion of an sRGB image; alpha, if any, is ignored.
LabImage srgb_to_lab(const RasterImage& image);

}  // namespace erysegm
