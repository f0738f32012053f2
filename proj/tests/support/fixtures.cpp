#include "fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unistd.h>

#include "erysegm/color.hpp"
#include "oracles.hpp"

namespace fixture {

namespace {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

void blur_plane(std::vector<float>& plane, int w, int h, double sigma) {
  const int r = static_cast<int>(std::ceil(3 * sigma));
  std::vector<double> k(2 * r + 1);
  double sum = 0;
  for (int i = -r; i <= r; ++i) sum += k[i + r] = std::exp(-i * i / (2 * sigma * sigma));
  for (double& v : k) v /= sum;
  std::vector<float> tmp(plane.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * plane[y * w + std::clamp(x + i, 0, w - 1)];
      tmp[y * w + x] = static_cast<float>(acc);
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp[std::clamp(y + i, 0, h - 1) * w + x];
      plane[y * w + x] = static_cast<float>(acc);
    }
  }
}

}  // namespace

Texture::Texture(int width, int height, std::uint64_t seed, bool skin_tone, int margin)
    : width_(width), height_(height), margin_(margin), stride_(width + 2 * margin) {
  const int W = stride_;
  const int H = height + 2 * margin;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // Channel 0..2 hold either sRGB (random colours) or L, a, b (skin).
  std::vector<float> ch[3];
  for (auto& c : ch) c.assign(static_cast<std::size_t>(W) * H, 0.0f);

  const double fx = 2 * M_PI / (60 + 80 * u(rng));
  const double fy = 2 * M_PI / (60 + 80 * u(rng));
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const double s = std::sin(fx * x) * std::cos(fy * y);
      const std::size_t i = static_cast<std::size_t>(y) * W + x;
      if (skin_tone) {
        ch[0][i] = static_cast<float>(60 + 6 * s);
        ch[1][i] = static_cast<float>(14 + 1.5 * s);
        ch[2][i] = static_cast<float>(17 - 1.5 * s);
      } else {
        ch[0][i] = static_cast<float>(128 + 40 * s);
        ch[1][i] = static_cast<float>(128 - 30 * s);
        ch[2][i] = static_cast<float>(110 + 20 * s);
      }
    }
  }

  const int rects = W * H / 700;
  for (int n = 0; n < rects; ++n) {
    const int rw = 6 + static_cast<int>(u(rng) * 40);
    const int rh = 6 + static_cast<int>(u(rng) * 40);
    const int x0 = static_cast<int>(u(rng) * (W - rw));
    const int y0 = static_cast<int>(u(rng) * (H - rh));
    float v[3];
    if (skin_tone) {
      v[0] = static_cast<float>(42 + 36 * u(rng));
      v[1] = static_cast<float>(13 + 3 * u(rng));
      v[2] = static_cast<float>(15 + 4 * u(rng));
    } else {
      for (float& c : v) c = static_cast<float>(255 * u(rng));
    }
    for (int y = y0; y < y0 + rh; ++y) {
      for (int x = x0; x < x0 + rw; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * W + x;
        for (int c = 0; c < 3; ++c) ch[c][i] = v[c];
      }
    }
  }

  if (skin_tone) {
    for (std::size_t i = 0; i < ch[0].size(); ++i) {
      const auto rgb = oracle::lab_to_srgb(ch[0][i], ch[1][i], ch[2][i]);
      for (int c = 0; c < 3; ++c) {
        ch[c][i] = static_cast<float>(std::clamp(rgb[static_cast<std::size_t>(c)], 0.0, 1.0) * 255);
      }
    }
  }
  rgb_.assign(static_cast<std::size_t>(W) * H * 3, 0.0f);
  for (int c = 0; c < 3; ++c) {
    blur_plane(ch[c], W, H, 1.0);
    for (std::size_t i = 0; i < ch[c].size(); ++i) rgb_[i * 3 + c] = ch[c][i];
  }
}

float Texture::sample(double x, double y, int c) const {
  const double gx = std::clamp(x + margin_, 0.0, static_cast<double>(stride_ - 1));
  const double gy = std::clamp(y + margin_, 0.0, static_cast<double>(height_ + 2 * margin_ - 1));
  const int x0 = std::min(static_cast<int>(gx), stride_ - 2);
  const int y0 = std::min(static_cast<int>(gy), height_ + 2 * margin_ - 2);
  const double tx = gx - x0;
  const double ty = gy - y0;
  auto at = [&](int xx, int yy) {
    return rgb_[(static_cast<std::size_t>(yy) * stride_ + xx) * 3 + c];
  };
  return static_cast<float>((1 - ty) * ((1 - tx) * at(x0, y0) + tx * at(x0 + 1, y0)) +
                            ty * ((1 - tx) * at(x0, y0 + 1) + tx * at(x0 + 1, y0 + 1)));
}

RasterImage Texture::view() const { return view(Homography::identity(), width_, height_); }

RasterImage Texture::view(const Homography& h, int out_width, int out_height) const {
  RasterImage out(out_width, out_height);
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      const erysegm::Vec2 q = h.apply(erysegm::Vec2{static_cast<double>(x), static_cast<double>(y)});
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = to_byte(sample(q.x, q.y, c));
    }
  }
  return out;
}

Homography random_homography(std::mt19937_64& rng, int width, int height, double max_shift) {
  std::uniform_real_distribution<double> d(-max_shift, max_shift);
  const double w = width - 1.0;
  const double h = height - 1.0;
  const std::array<erysegm::Vec2, 4> corners{{{0, 0}, {w, 0}, {w, h}, {0, h}}};
  std::vector<erysegm::PointPair> pairs;
  for (const auto& c : corners) pairs.push_back({c, {c.x + d(rng), c.y + d(rng)}});
  return erysegm::estimate_homography_dlt(pairs);
}

double max_corner_error(const Homography& a, const Homography& b, int width, int height) {
  const double w = width - 1.0;
  const double h = height - 1.0;
  double worst = 0;
  for (const erysegm::Vec2 c : {erysegm::Vec2{0, 0}, erysegm::Vec2{w, 0}, erysegm::Vec2{w, h},
                                erysegm::Vec2{0, h}}) {
    const auto p = a.apply(c);
    const auto q = b.apply(c);
    worst = std::max(worst, std::hypot(p.x - q.x, p.y - q.y));
  }
  return worst;
}

PatchFixture red_patch_fixture(int size, std::uint64_t seed, double boost, double max_shift) {
  const Texture plane(size, size, seed, /*skin_tone=*/true);
  PatchFixture f;
  f.original = plane.view();
  f.truth = BinaryMask(size, size);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int patches = 5;
  std::vector<std::array<double, 4>> placed;  // cx, cy, rx, ry
  for (int tries = 0; static_cast<int>(placed.size()) < patches && tries < 1000; ++tries) {
    const double rx = size * (0.04 + 0.04 * u(rng));
    const double ry = size * (0.04 + 0.04 * u(rng));
    const double lo = size * 0.2;
    const double cx = lo + (size - 2 * lo) * u(rng);
    const double cy = lo + (size - 2 * lo) * u(rng);
    bool clear = true;
    for (const auto& p : placed) {
      if (std::hypot(p[0] - cx, p[1] - cy) < p[2] + p[3] + rx + ry) clear = false;
    }
    if (clear) placed.push_back({cx, cy, rx, ry});
  }
  for (const auto& p : placed) {
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const double ex = (x - p[0]) / p[2];
        const double ey = (y - p[1]) / p[3];
        if (ex * ex + ey * ey > 1.0) continue;
        f.truth.set(x, y, true);
        const auto lab = oracle::srgb_to_lab(f.original.at(x, y, 0) / 255.0,
                                             f.original.at(x, y, 1) / 255.0,
                                             f.original.at(x, y, 2) / 255.0);
        const auto rgb = oracle::lab_to_srgb(lab.L, lab.a + boost, lab.b);
        for (int c = 0; c < 3; ++c) f.original.at(x, y, c) = to_byte(rgb[static_cast<std::size_t>(c)] * 255);
      }
    }
  }

  if (max_shift > 0) {
    f.reference_to_original = random_homography(rng, size, size, max_shift);
    f.reference = plane.view(f.reference_to_original, size, size);
  } else {
    f.reference = plane.view();
  }
  return f;
}

void inject_outliers(erysegm::FeatureMatches& fm, double fraction, std::mt19937_64& rng) {
  const std::size_t good = fm.matches.size();
  const auto extra = static_cast<std::size_t>(std::ceil(good * fraction / (1.0 - fraction)));
  std::uniform_int_distribution<int> ia(0, static_cast<int>(fm.original.keypoints.size()) - 1);
  std::uniform_int_distribution<int> ib(0, static_cast<int>(fm.reference.keypoints.size()) - 1);
  for (std::size_t i = 0; i < extra; ++i) {
    fm.matches.push_back({ia(rng), ib(rng), 0, 0.0f});
  }
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a[i] && b[i];
    uni += a[i] || b[i];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

RasterImage checkerboard(int n, int cell, int border) {
  const int size = n * cell + 2 * border;
  RasterImage img(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      std::uint8_t v = 128;
      if (x >= border && y >= border && x < size - border && y < size - border) {
        v = (((x - border) / cell + (y - border) / cell) % 2) ? 255 : 0;
      }
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = v;
    }
  }
  return img;
}

RasterImage solid(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RasterImage img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  }
  return img;
}

namespace {
// Scratch directories are removed at process exit.
struct ScratchRegistry {
  std::vector<std::filesystem::path> dirs;
  ~ScratchRegistry() {
    std::error_code ec;
    for (const auto& d : dirs) std::filesystem::remove_all(d, ec);
  }
};
}  // namespace

std::filesystem::path temp_dir(const std::string& tag) {
  static ScratchRegistry registry;
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("erysegm_" + tag + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  registry.dirs.push_back(dir);
  return dir;
}

}  // namespace fixture
