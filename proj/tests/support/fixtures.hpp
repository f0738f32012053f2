#pragma once

// Synthetic images with known ground truth.

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "erysegm/align.hpp"
#include "erysegm/homography.hpp"
#include "erysegm/image.hpp"

namespace fixture {

using erysegm::BinaryMask;
using erysegm::Homography;
using erysegm::RasterImage;

/// A textured plane larger than any view taken of it, so that warped views
/// never sample outside it. Stored as blurred float sRGB.
class Texture {
 public:
  /// `skin_tone`: piecewise luminance with near-constant chroma around a
  /// skin colour; otherwise random colours.
  Texture(int width, int height, std::uint64_t seed, bool skin_tone = false, int margin = 96);

  int width() const { return width_; }
  int height() const { return height_; }

  /// The plane's own pixel grid.
  RasterImage view() const;
  /// Pixel p of the result shows plane point h(p) (bilinear).
  RasterImage view(const Homography& h, int out_width, int out_height) const;

 private:
  float sample(double x, double y, int c) const;
  int width_;
  int height_;
  int margin_;
  int stride_;
  std::vector<float> rgb_;
};

/// Corners of a w x h frame each displaced by up to `max_shift` px; the
/// returned map takes frame points to displaced points.
Homography random_homography(std::mt19937_64& rng, int width, int height, double max_shift);

/// Largest displacement of the frame's corners between two homographies.
double max_corner_error(const Homography& a, const Homography& b, int width, int height);

struct PatchFixture {
  RasterImage original;   ///< with planted red patches
  RasterImage reference;  ///< clear skin, possibly warped
  BinaryMask truth;       ///< planted patches, original frame
  Homography reference_to_original;
};

/// Skin-tone plane with elliptical patches whose CIELAB a* is raised by
/// `boost`. With `max_shift` > 0 the reference is a perspective view.
PatchFixture red_patch_fixture(int size, std::uint64_t seed, double boost = 20.0,
                               double max_shift = 0.0);

/// Appends uniformly random matches so they make up `fraction` of the list.
void inject_outliers(erysegm::FeatureMatches& fm, double fraction, std::mt19937_64& rng);

double iou(const BinaryMask& a, const BinaryMask& b);

/// n x n cells of `cell` px alternating black/white, with a `border` px
/// mid-gray frame.
RasterImage checkerboard(int n, int cell, int border);

RasterImage solid(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace fixture
