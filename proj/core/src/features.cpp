#include "erysegm/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "erysegm/error.hpp"

namespace erysegm {

namespace {

constexpr float kHarrisK = 0.04f;
constexpr double kHarrisWindowSigma = 1.5;
constexpr int kNmsRadius = 3;
constexpr double kDescriptorSmoothing = 2.0;
constexpr int kDescriptorBits = 256;

struct SamplePair {
  float x1, y1, x2, y2;
};

// Test-point pairs drawn once from a fixed-seed Mersenne Twister. Raw engine
// output is used (not std distributions) so the table is identical across
// standard library implementations.
const std::array<SamplePair, kDescriptorBits>& sampling_pattern() {
  static const std::array<SamplePair, kDescriptorBits> pattern = [] {
    std::mt19937 engine(0x0b5e55edu);
    auto uniform = [&engine] { return (static_cast<double>(engine()) + 0.5) / 4294967296.0; };
    // Isotropic Gaussian around the keypoint, clipped to the inner disc.
    const double sigma = (2.0 * kPatchRadius + 1.0) / 5.0;
    const double limit = kPatchRadius - 2.0;
    auto draw = [&](float& x, float& y) {
      for (;;) {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * std::numbers::pi * uniform();
        const double px = sigma * r * std::cos(t);
        const double py = sigma * r * std::sin(t);
        if (px * px + py * py <= limit * limit) {
          x = static_cast<float>(px);
          y = static_cast<float>(py);
          return;
        }
      }
    };
    std::array<SamplePair, kDescriptorBits> table{};
    for (auto& pair : table) {
      do {
        draw(pair.x1, pair.y1);
        draw(pair.x2, pair.y2);
      } while (std::hypot(pair.x1 - pair.x2, pair.y1 - pair.y2) < 1.0);
    }
    return table;
  }();
  return pattern;
}

// Offsets of the disc used for orientation moments, with per-row half widths.
const std::vector<int>& moment_half_widths() {
  static const std::vector<int> widths = [] {
    std::vector<int> w(kPatchRadius + 1);
    for (int dy = 0; dy <= kPatchRadius; ++dy) {
      w[dy] = static_cast<int>(std::floor(std::sqrt(double(kPatchRadius * kPatchRadius - dy * dy))));
    }
    return w;
  }();
  return widths;
}

std::vector<float> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<float> k(2 * static_cast<std::size_t>(radius) + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = static_cast<float>(v);
    sum += v;
  }
  for (auto& v : k) v = static_cast<float>(v / sum);
  return k;
}

void blur_plane(std::vector<float>& plane, int w, int h, const std::vector<float>& kernel) {
  const int r = static_cast<int>(kernel.size() / 2);
  std::vector<float> tmp(plane.size());
  std::vector<float> line(static_cast<std::size_t>(std::max(w, h) + 2 * r));
  for (int y = 0; y < h; ++y) {
    const float* src = plane.data() + static_cast<std::size_t>(y) * w;
    for (int i = -r; i < w + r; ++i) line[i + r] = src[std::clamp(i, 0, w - 1)];
    float* dst = tmp.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int k = 0; k <= 2 * r; ++k) acc += kernel[k] * line[x + k];
      dst[x] = acc;
    }
  }
  for (int x = 0; x < w; ++x) {
    for (int i = -r; i < h + r; ++i) {
      line[i + r] = tmp[static_cast<std::size_t>(std::clamp(i, 0, h - 1)) * w + x];
    }
    for (int y = 0; y < h; ++y) {
      float acc = 0.0f;
      for (int k = 0; k <= 2 * r; ++k) acc += kernel[k] * line[y + k];
      plane[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
}

std::vector<float> harris_response(const GrayImage& image) {
  const int w = image.width();
  const int h = image.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<float> xx(n), yy(n), xy(n);
  constexpr float kScale = 1.0f / (8.0f * 255.0f);
  auto px = [&](int x, int y) {
    return image.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float gx = (px(x + 1, y - 1) + 2.0f * px(x + 1, y) + px(x + 1, y + 1) -
                        px(x - 1, y - 1) - 2.0f * px(x - 1, y) - px(x - 1, y + 1)) * kScale;
      const float gy = (px(x - 1, y + 1) + 2.0f * px(x, y + 1) + px(x + 1, y + 1) -
                        px(x - 1, y - 1) - 2.0f * px(x, y - 1) - px(x + 1, y - 1)) * kScale;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      xx[i] = gx * gx;
      yy[i] = gy * gy;
      xy[i] = gx * gy;
    }
  }
  const auto kernel = gaussian_kernel(kHarrisWindowSigma);
  blur_plane(xx, w, h, kernel);
  blur_plane(yy, w, h, kernel);
  blur_plane(xy, w, h, kernel);
  std::vector<float> response(n);
  for (std::size_t i = 0; i < n; ++i) {
    const float tr = xx[i] + yy[i];
    response[i] = xx[i] * yy[i] - xy[i] * xy[i] - kHarrisK * tr * tr;
  }
  return response;
}

float parabolic_offset(float left, float centre, float right) {
  const float denom = left - 2.0f * centre + right;
  if (!(denom < 0.0f)) return 0.0f;
  return std::clamp(0.5f * (left - right) / denom, -0.5f, 0.5f);
}

float bilinear(const GrayImage& image, float x, float y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const float fx = x - x0;
  const float fy = y - y0;
  const float* r0 = image.row(y0);
  const float* r1 = image.row(y0 + 1);
  const float top = r0[x0] + fx * (r0[x0 + 1] - r0[x0]);
  const float bottom = r1[x0] + fx * (r1[x0 + 1] - r1[x0]);
  return top + fy * (bottom - top);
}

bool inside_margin(const Keypoint& kp, int w, int h, int margin) {
  return kp.x >= margin && kp.y >= margin && kp.x <= w - 1 - margin && kp.y <= h - 1 - margin;
}

}  // namespace

GrayImage gaussian_blur(const GrayImage& image, double sigma) {
  if (sigma <= 0.0) return image;
  std::vector<float> plane(image.data().begin(), image.data().end());
  blur_plane(plane, image.width(), image.height(), gaussian_kernel(sigma));
  return GrayImage(image.width(), image.height(), std::move(plane));
}

GrayImage resize_gray(const GrayImage& image, int width, int height) {
  GrayImage out(width, height);
  const double sx = static_cast<double>(image.width()) / width;
  const double sy = static_cast<double>(image.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, image.height() - 1);
    const float wy = static_cast<float>(fy - y0);
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, image.width() - 1);
      const float wx = static_cast<float>(fx - x0);
      const float top = image.at(x0, y0) + wx * (image.at(x1, y0) - image.at(x0, y0));
      const float bottom = image.at(x0, y1) + wx * (image.at(x1, y1) - image.at(x0, y1));
      out.at(x, y) = top + wy * (bottom - top);
    }
  }
  return out;
}

std::vector<Keypoint> detect_keypoints(const GrayImage& image, int max_count, float threshold) {
  const int w = image.width();
  const int h = image.height();
  if (w < 2 * kKeypointMargin + 1 || h < 2 * kKeypointMargin + 1) {
    throw Error(ErrorKind::ImageTooSmall,
                std::to_string(w) + "x" + std::to_string(h) + " is smaller than the " +
                    std::to_string(2 * kKeypointMargin + 1) + " px detector footprint");
  }
  std::vector<Keypoint> keypoints;
  if (max_count <= 0) return keypoints;

  const std::vector<float> response = harris_response(image);
  auto at = [&](int x, int y) { return response[static_cast<std::size_t>(y) * w + x]; };

  for (int y = kKeypointMargin; y < h - kKeypointMargin; ++y) {
    for (int x = kKeypointMargin; x < w - kKeypointMargin; ++x) {
      const float r = at(x, y);
      if (!(r > threshold)) continue;
      // Strict maximum; plateaus resolve to the first pixel in raster order.
      bool is_max = true;
      for (int dy = -kNmsRadius; dy <= kNmsRadius && is_max; ++dy) {
        for (int dx = -kNmsRadius; dx <= kNmsRadius; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const float q = at(x + dx, y + dy);
          const bool before = dy < 0 || (dy == 0 && dx < 0);
          if (q > r || (before && q == r)) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      Keypoint kp;
      kp.x = static_cast<float>(x) + parabolic_offset(at(x - 1, y), r, at(x + 1, y));
      kp.y = static_cast<float>(y) + parabolic_offset(at(x, y - 1), r, at(x, y + 1));
      kp.score = r;
      keypoints.push_back(kp);
    }
  }

  std::sort(keypoints.begin(), keypoints.end(), [](const Keypoint& a, const Keypoint& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  if (keypoints.size() > static_cast<std::size_t>(max_count)) {
    keypoints.resize(static_cast<std::size_t>(max_count));
  }
  assign_orientations(image, keypoints);
  return keypoints;
}

void assign_orientations(const GrayImage& image, std::span<Keypoint> keypoints) {
  const auto& half = moment_half_widths();
  const int w = image.width();
  const int h = image.height();
  for (auto& kp : keypoints) {
    const int cx = static_cast<int>(std::lround(kp.x));
    const int cy = static_cast<int>(std::lround(kp.y));
    double m10 = 0.0;
    double m01 = 0.0;
    for (int dy = -kPatchRadius; dy <= kPatchRadius; ++dy) {
      const int y = cy + dy;
      if (y < 0 || y >= h) continue;
      const int hw = half[static_cast<std::size_t>(std::abs(dy))];
      const float* row = image.row(y);
      for (int dx = -hw; dx <= hw; ++dx) {
        const int x = cx + dx;
        if (x < 0 || x >= w) continue;
        m10 += dx * static_cast<double>(row[x]);
        m01 += dy * static_cast<double>(row[x]);
      }
    }
    double angle = std::atan2(m01, m10);
    if (angle < 0.0) angle += 2.0 * std::numbers::pi;
    if (angle >= 2.0 * std::numbers::pi) angle = 0.0;
    kp.orientation = static_cast<float>(angle);
  }
}

DescriptorSet compute_descriptors(const GrayImage& image, std::span<const Keypoint> keypoints) {
  DescriptorSet out;
  if (keypoints.empty()) return out;
  const GrayImage smooth = gaussian_blur(image, kDescriptorSmoothing);
  const auto& pattern = sampling_pattern();
  const int margin = kPatchRadius + 1;
  out.descriptors.reserve(keypoints.size());
  out.keypoint_index.reserve(keypoints.size());
  for (std::size_t k = 0; k < keypoints.size(); ++k) {
    const Keypoint& kp = keypoints[k];
    if (!inside_margin(kp, image.width(), image.height(), margin)) continue;
    const float c = std::cos(kp.orientation);
    const float s = std::sin(kp.orientation);
    Descriptor d;
    for (int i = 0; i < kDescriptorBits; ++i) {
      const SamplePair& p = pattern[static_cast<std::size_t>(i)];
      const float v1 = bilinear(smooth, kp.x + c * p.x1 - s * p.y1, kp.y + s * p.x1 + c * p.y1);
      const float v2 = bilinear(smooth, kp.x + c * p.x2 - s * p.y2, kp.y + s * p.x2 + c * p.y2);
      if (v1 < v2) d.set(i);
    }
    out.descriptors.push_back(d);
    out.keypoint_index.push_back(static_cast<int>(k));
  }
  return out;
}

std::vector<Match> match_descriptors(std::span<const Descriptor> a, std::span<const Descriptor> b,
                                     double ratio_max, bool cross_check) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorKind::EmptyDescriptorList,
                "cannot match " + std::to_string(a.size()) + " against " +
                    std::to_string(b.size()) + " descriptors");
  }
  constexpr int kNone = std::numeric_limits<int>::max();
  std::vector<int> best_a(a.size(), kNone), second_a(a.size(), kNone), arg_a(a.size(), -1);
  std::vector<int> best_b(b.size(), kNone), arg_b(b.size(), -1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    int best = kNone;
    int second = kNone;
    int arg = -1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const int d = a[i].distance(b[j]);
      if (d < best) {
        second = best;
        best = d;
        arg = static_cast<int>(j);
      } else if (d < second) {
        second = d;
      }
      if (d < best_b[j]) {
        best_b[j] = d;
        arg_b[j] = static_cast<int>(i);
      }
    }
    best_a[i] = best;
    second_a[i] = second;
    arg_a[i] = arg;
  }

  std::vector<Match> matches;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int j = arg_a[i];
    if (cross_check && arg_b[static_cast<std::size_t>(j)] != static_cast<int>(i)) continue;
    float ratio = 0.0f;
    if (b.size() > 1) {
      // Two equally distant candidates are fully ambiguous.
      ratio = second_a[i] == 0 ? 1.0f
                               : static_cast<float>(best_a[i]) / static_cast<float>(second_a[i]);
      if (ratio > ratio_max) continue;
    }
    matches.push_back(Match{static_cast<int>(i), j, best_a[i], ratio});
  }
  return matches;
}

Features extract_features(const GrayImage& image, const FeatureParams& params) {
  Features out;
  const int levels = std::max(1, params.levels);
  const double factor = std::max(1.0001, params.scale_factor);

  // Per-level budgets shrink geometrically with the level's linear size.
  std::vector<int> budget(static_cast<std::size_t>(levels));
  {
    const double q = 1.0 / factor;
    double first = params.max_keypoints * (1.0 - q) / (1.0 - std::pow(q, levels));
    int assigned = 0;
    for (int l = 0; l < levels - 1; ++l) {
      budget[l] = static_cast<int>(std::lround(first));
      assigned += budget[l];
      first *= q;
    }
    budget[levels - 1] = std::max(0, params.max_keypoints - assigned);
  }

  for (int l = 0; l < levels; ++l) {
    const double scale = std::pow(factor, l);
    const int lw = static_cast<int>(std::lround(image.width() / scale));
    const int lh = static_cast<int>(std::lround(image.height() / scale));
    if (lw < 2 * kKeypointMargin + 1 || lh < 2 * kKeypointMargin + 1) {
      if (l == 0) {
        throw Error(ErrorKind::ImageTooSmall,
                    std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                        " is too small for feature extraction");
      }
      break;
    }
    GrayImage level = image;
    if (l > 0) {
      const double sigma = 0.5 * std::sqrt(scale * scale - 1.0);
      level = resize_gray(gaussian_blur(image, sigma), lw, lh);
    }
    std::vector<Keypoint> kps = detect_keypoints(level, budget[l], params.threshold);
    DescriptorSet set = compute_descriptors(level, kps);
    const double rx = static_cast<double>(image.width()) / lw;
    const double ry = static_cast<double>(image.height()) / lh;
    for (std::size_t i = 0; i < set.descriptors.size(); ++i) {
      Keypoint kp = kps[static_cast<std::size_t>(set.keypoint_index[i])];
      kp.x = static_cast<float>((kp.x + 0.5) * rx - 0.5);
      kp.y = static_cast<float>((kp.y + 0.5) * ry - 0.5);
      kp.octave = l;
      kp.scale = static_cast<float>(scale);
      out.keypoints.push_back(kp);
      out.descriptors.push_back(set.descriptors[i]);
    }
  }
  return out;
}

}  // namespace erysegm
