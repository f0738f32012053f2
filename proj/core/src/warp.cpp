#include "erysegm/warp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "erysegm/error.hpp"
#include "erysegm/mask.hpp"

namespace erysegm {

WarpResult warp_to(const RasterImage& source, const Homography& h, int out_width,
                   int out_height) {
  const Homography inv = h.inverse();
  WarpResult out{RasterImage(out_width, out_height, source.channels()),
                 BinaryMask(out_width, out_height)};
  const auto& m = inv.matrix();
  const int ch = source.channels();
  const double max_x = source.width() - 1.0;
  const double max_y = source.height() - 1.0;
  const std::size_t stride = static_cast<std::size_t>(source.width()) * ch;
  const std::uint8_t* src = source.data().data();
  std::uint8_t* dst = out.image.data().data();
  auto valid = out.valid.bits();

  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      const double w = m[6] * x + m[7] * y + m[8];
      if (!(w > 0.0) && !(w < 0.0)) continue;
      const double u = (m[0] * x + m[1] * y + m[2]) / w;
      const double v = (m[3] * x + m[4] * y + m[5]) / w;
      if (!(u >= 0.0 && v >= 0.0 && u <= max_x && v <= max_y)) continue;
      const int x0 = static_cast<int>(u);
      const int y0 = static_cast<int>(v);
      const double fx = u - x0;
      const double fy = v - y0;
      const int x1 = fx > 0.0 ? x0 + 1 : x0;
      const int y1 = fy > 0.0 ? y0 + 1 : y0;
      const std::uint8_t* p00 = src + y0 * stride + static_cast<std::size_t>(x0) * ch;
      const std::uint8_t* p01 = src + y0 * stride + static_cast<std::size_t>(x1) * ch;
      const std::uint8_t* p10 = src + y1 * stride + static_cast<std::size_t>(x0) * ch;
      const std::uint8_t* p11 = src + y1 * stride + static_cast<std::size_t>(x1) * ch;
      const std::size_t o = (static_cast<std::size_t>(y) * out_width + x) * ch;
      for (int c = 0; c < ch; ++c) {
        const double top = p00[c] + fx * (p01[c] - p00[c]);
        const double bottom = p10[c] + fx * (p11[c] - p10[c]);
        const double val = top + fy * (bottom - top);
        dst[o + c] = static_cast<std::uint8_t>(std::floor(std::clamp(val, 0.0, 255.0) + 0.5));
      }
      valid[static_cast<std::size_t>(y) * out_width + x] = 1;
    }
  }
  return out;
}

RasterImage crop_image(const RasterImage& image, const Rect& rect) {
  if (rect.width < 1 || rect.height < 1 || rect.x < 0 || rect.y < 0 ||
      rect.x + rect.width > image.width() || rect.y + rect.height > image.height()) {
    throw Error(ErrorKind::OutOfBounds, "crop rectangle exceeds the image");
  }
  RasterImage out(rect.width, rect.height, image.channels());
  const std::size_t row_bytes = static_cast<std::size_t>(rect.width) * image.channels();
  for (int y = 0; y < rect.height; ++y) {
    const auto src = image.row(rect.y + y).subspan(
        static_cast<std::size_t>(rect.x) * image.channels(), row_bytes);
    std::copy(src.begin(), src.end(),
              out.data().begin() + static_cast<std::ptrdiff_t>(y * row_bytes));
  }
  return out;
}

Rect central_crop_rect(const BinaryMask& valid, double min_coverage) {
  const int w = valid.width();
  const int h = valid.height();
  // Summed-area table with a zero top row / left column.
  std::vector<long long> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0);
  auto s = [&](int x, int y) -> long long& { return sat[static_cast<std::size_t>(y) * (w + 1) + x]; };
  for (int y = 0; y < h; ++y) {
    long long row = 0;
    for (int x = 0; x < w; ++x) {
      row += valid.at(x, y) ? 1 : 0;
      s(x + 1, y + 1) = s(x + 1, y) + row;
    }
  }
  if (s(w, h) == 0) throw Error(ErrorKind::NoValidOverlap, "valid mask is empty");

  Rect best;
  long long best_area = 0;
  for (int mx = 0; 2 * mx < w; ++mx) {
    const int rw = w - 2 * mx;
    if (static_cast<long long>(rw) * h <= best_area) break;
    for (int my = 0; 2 * my < h; ++my) {
      const int rh = h - 2 * my;
      const long long area = static_cast<long long>(rw) * rh;
      if (area <= best_area) break;
      const long long inside = s(mx + rw, my + rh) - s(mx, my + rh) - s(mx + rw, my) + s(mx, my);
      if (inside > 0 && static_cast<double>(inside) >= min_coverage * static_cast<double>(area)) {
        best = Rect{mx, my, rw, rh};
        best_area = area;
        break;
      }
    }
  }
  if (best_area == 0) {
    throw Error(ErrorKind::NoValidOverlap,
                "no centred rectangle reaches coverage " + std::to_string(min_coverage));
  }
  return best;
}

CropResult central_crop(const RasterImage& original, const RasterImage& warped,
                        const BinaryMask& valid, double min_coverage) {
  if (!original.same_size(warped) || !valid.matches(original)) {
    throw Error(ErrorKind::DimensionMismatch, "central_crop inputs differ in size");
  }
  const Rect rect = central_crop_rect(valid, min_coverage);
  CropResult out{crop_image(original, rect), crop_image(warped, rect), crop_mask(valid, rect),
                 rect, 0.0};
  out.coverage = static_cast<double>(out.valid.count()) / static_cast<double>(rect.area());
  return out;
}

}  // namespace erysegm
