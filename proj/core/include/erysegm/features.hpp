#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "erysegm/image.hpp"

namespace erysegm {

/// Corner location in image coordinates (pixel centres at integers).
struct Keypoint {
  float x = 0.0f;
  float y = 0.0f;
  float score = 0.0f;        ///< Harris response, > 0
  float orientation = 0.0f;  ///< intensity-centroid angle in [0, 2*pi)
  int octave = 0;            ///< pyramid level the point was found on
  float scale = 1.0f;        ///< level-to-base scale factor
};

/// 256-bit binary descriptor.
struct Descriptor {
  std::array<std::uint64_t, 4> bits{};

  int distance(const Descriptor& other) const {
    return std::popcount(bits[0] ^ other.bits[0]) + std::popcount(bits[1] ^ other.bits[1]) +
           std::popcount(bits[2] ^ other.bits[2]) + std::popcount(bits[3] ^ other.bits[3]);
  }
  bool test(int i) const { return (bits[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u; }
  void set(int i) { bits[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63); }

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

struct Match {
  int index_a = 0;
  int index_b = 0;
  int distance = 0;
  float ratio = 0.0f;  ///< best / second-best distance; 0 when b has one entry
};

/// Radius of the disc the descriptor pattern and orientation moments use.
inline constexpr int kPatchRadius = 15;
/// Minimum keypoint distance from any image edge.
inline constexpr int kKeypointMargin = kPatchRadius + 2;

/// Default Harris response cutoff for intensities scaled to [0, 1].
inline constexpr float kDefaultHarrisThreshold = 1e-6f;

/// Harris corners (local maxima of the response, refined to sub-pixel),
/// sorted by descending score, at most `max_count`. Orientation is assigned.
/// Throws ImageTooSmall when the image cannot hold a single patch.
std::vector<Keypoint> detect_keypoints(const GrayImage& image, int max_count,
                                       float threshold = kDefaultHarrisThreshold);

/// Intensity-centroid orientation of the disc around each keypoint.
void assign_orientations(const GrayImage& image, std::span<Keypoint> keypoints);

struct DescriptorSet {
  std::vector<Descriptor> descriptors;
  std::vector<int> keypoint_index;  ///< source keypoint of each descriptor
};

/// Steered BRIEF descriptors on a smoothed copy of `image`. Keypoints closer
/// than the patch margin to the border are dropped (see keypoint_index).
DescriptorSet compute_descriptors(const GrayImage& image, std::span<const Keypoint> keypoints);

/// Brute-force Hamming matching of each `a` entry against `b` with ratio test
/// and, optionally, a mutual-best cross-check. Throws EmptyDescriptorList.
std::vector<Match> match_descriptors(std::span<const Descriptor> a,
                                     std::span<const Descriptor> b, double ratio_max = 0.75,
                                     bool cross_check = true);

struct FeatureParams {
  int max_keypoints = 3000;
  int levels = 4;
  double scale_factor = 1.25;
  float threshold = kDefaultHarrisThreshold;
};

/// Keypoints (in base-image coordinates) paired one-to-one with descriptors.
struct Features {
  std::vector<Keypoint> keypoints;
  std::vector<Descriptor> descriptors;
};

/// Multi-level detection and description over a scale pyramid.
Features extract_features(const GrayImage& image, const FeatureParams& params = {});

/// Separable Gaussian blur with replicated borders.
GrayImage gaussian_blur(const GrayImage& image, double sigma);

/// Bilinear resample to the given size with pixel-centre alignment.
GrayImage resize_gray(const GrayImage& image, int width, int height);

}  // namespace erysegm
