#include "erysegm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "erysegm/error.hpp"

namespace erysegm {

namespace {

void require_same(const RasterImage& a, const RasterImage& b) {
  if (!a.same_size(b) || a.channels() != b.channels()) {
    throw Error(ErrorKind::DimensionMismatch,
                "mse operands differ: " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + "x" + std::to_string(a.channels()) + " vs " +
                    std::to_string(b.width()) + "x" + std::to_string(b.height()) + "x" +
                    std::to_string(b.channels()));
  }
}

double squared_pixel_diff(const std::uint8_t* pa, const std::uint8_t* pb, int channels) {
  long long acc = 0;
  for (int c = 0; c < channels; ++c) {
    const int d = static_cast<int>(pa[c]) - static_cast<int>(pb[c]);
    acc += static_cast<long long>(d) * d;
  }
  return static_cast<double>(acc);
}

}  // namespace

double mse(const RasterImage& a, const RasterImage& b) {
  require_same(a, b);
  const auto da = a.data();
  const auto db = b.data();
  // Integer accumulation is exact for any realistic image size.
  unsigned long long acc = 0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const int d = static_cast<int>(da[i]) - static_cast<int>(db[i]);
    acc += static_cast<unsigned long long>(d * d);
  }
  return static_cast<double>(acc) / static_cast<double>(da.size());
}

double mse(const RasterImage& a, const RasterImage& b, const BinaryMask& mask) {
  require_same(a, b);
  if (!mask.matches(a)) {
    throw Error(ErrorKind::DimensionMismatch, "mse mask does not match image dimensions");
  }
  const int ch = a.channels();
  const auto da = a.data();
  const auto db = b.data();
  const auto bits = mask.bits();
  double acc = 0.0;
  std::size_t selected = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    const std::size_t o = i * static_cast<std::size_t>(ch);
    acc += squared_pixel_diff(da.data() + o, db.data() + o, ch);
    ++selected;
  }
  if (selected == 0) throw Error(ErrorKind::EmptyMask, "mse mask selects no pixels");
  return acc / static_cast<double>(selected * static_cast<std::size_t>(ch));
}

RasterImage resize_bilinear(const RasterImage& image, int width, int height) {
  RasterImage out(width, height, image.channels());
  if (image.width() == width && image.height() == height) {
    out = image;
    return out;
  }
  const int ch = image.channels();
  const double sx = static_cast<double>(image.width()) / width;
  const double sy = static_cast<double>(image.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, image.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, image.width() - 1);
      const double wx = fx - x0;
      for (int c = 0; c < ch; ++c) {
        const double top = image.at(x0, y0, c) * (1.0 - wx) + image.at(x1, y0, c) * wx;
        const double bottom = image.at(x0, y1, c) * (1.0 - wx) + image.at(x1, y1, c) * wx;
        const double v = top * (1.0 - wy) + bottom * wy;
        out.at(x, y, c) = static_cast<std::uint8_t>(std::floor(std::clamp(v, 0.0, 255.0) + 0.5));
      }
    }
  }
  return out;
}

}  // namespace erysegm
