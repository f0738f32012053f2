#include "erysegm/mask.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "erysegm/error.hpp"

namespace erysegm {

namespace {

void require_same(const BinaryMask& a, const BinaryMask& b, const char* op) {
  if (!a.same_size(b)) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(op) + ": " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
}

// Plain row-major bit grid used for padded intermediate results.
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> v;

  std::uint8_t* row(int y) { return v.data() + static_cast<std::size_t>(y) * width; }
  const std::uint8_t* row(int y) const { return v.data() + static_cast<std::size_t>(y) * width; }
};

std::vector<int> disc_half_widths(int radius) {
  std::vector<int> hw(static_cast<std::size_t>(radius) + 1);
  for (int dy = 0; dy <= radius; ++dy) {
    hw[dy] = static_cast<int>(std::floor(std::sqrt(static_cast<double>(radius) * radius -
                                                   static_cast<double>(dy) * dy) + 1e-9));
  }
  return hw;
}

// One erosion (dilate == false) or dilation over the whole grid. Samples
// outside the grid read as `outside`.
Grid morph_grid(const Grid& src, int radius, bool dilate, bool outside) {
  const int w = src.width;
  const int h = src.height;
  const std::vector<int> hw = disc_half_widths(radius);

  // Horizontal pass per distinct half-width: horiz[k] holds the row-wise
  // result for half-width hw[k].
  std::vector<Grid> horiz(hw.size());
  std::vector<int> prefix(static_cast<std::size_t>(w) + 1);
  for (std::size_t k = 0; k < hw.size(); ++k) {
    if (k > 0 && hw[k] == hw[k - 1]) continue;
    horiz[k] = Grid{w, h, std::vector<std::uint8_t>(src.v.size())};
  }
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* s = src.row(y);
    prefix[0] = 0;
    for (int x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + s[x];
    for (std::size_t k = 0; k < hw.size(); ++k) {
      if (horiz[k].v.empty()) continue;
      std::uint8_t* d = horiz[k].row(y);
      const int r = hw[k];
      for (int x = 0; x < w; ++x) {
        const int lo = x - r;
        const int hi = x + r;
        const int clo = std::max(lo, 0);
        const int chi = std::min(hi, w - 1);
        const int ones = prefix[chi + 1] - prefix[clo];
        const bool clipped = lo < 0 || hi >= w;
        if (dilate) {
          d[x] = (ones > 0 || (clipped && outside)) ? 1 : 0;
        } else {
          d[x] = (ones == chi - clo + 1 && (!clipped || outside)) ? 1 : 0;
        }
      }
    }
  }
  auto source_for = [&](int dy) -> const Grid& {
    std::size_t k = static_cast<std::size_t>(std::abs(dy));
    while (horiz[k].v.empty()) --k;
    return horiz[k];
  };

  Grid out{w, h, std::vector<std::uint8_t>(src.v.size(), dilate ? 0 : 1)};
  for (int dy = -radius; dy <= radius; ++dy) {
    const Grid& hsrc = source_for(dy);
    for (int y = 0; y < h; ++y) {
      const int sy = y + dy;
      std::uint8_t* d = out.row(y);
      if (sy < 0 || sy >= h) {
        if (dilate && outside) std::fill(d, d + w, std::uint8_t{1});
        if (!dilate && !outside) std::fill(d, d + w, std::uint8_t{0});
        continue;
      }
      const std::uint8_t* s = hsrc.row(sy);
      if (dilate) {
        for (int x = 0; x < w; ++x) d[x] |= s[x];
      } else {
        for (int x = 0; x < w; ++x) d[x] &= s[x];
      }
    }
  }
  return out;
}

Grid pad(const BinaryMask& mask, int border, bool value) {
  Grid g{mask.width() + 2 * border, mask.height() + 2 * border, {}};
  g.v.assign(static_cast<std::size_t>(g.width) * g.height, value ? 1 : 0);
  const auto bits = mask.bits();
  for (int y = 0; y < mask.height(); ++y) {
    std::copy_n(bits.data() + static_cast<std::size_t>(y) * mask.width(), mask.width(),
                g.row(y + border) + border);
  }
  return g;
}

BinaryMask unpad(const Grid& g, int border, int width, int height) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    std::copy_n(g.row(y + border) + border, width,
                bits.data() + static_cast<std::size_t>(y) * width);
  }
  return BinaryMask(width, height, std::move(bits));
}

// Applies first/second morphological steps as if the mask were embedded in
// an infinite plane filled with `outside`. The border of `radius` pixels
// carries the first step's values that the second step needs.
BinaryMask morph_pair(const BinaryMask& mask, int radius, bool first_dilate, bool outside) {
  if (radius < 0) throw std::invalid_argument("morphology radius must be >= 0");
  if (radius == 0) return mask;
  const Grid padded = pad(mask, radius, outside);
  const Grid first = morph_grid(padded, radius, first_dilate, outside);
  const Grid second = morph_grid(first, radius, !first_dilate, outside);
  return unpad(second, radius, mask.width(), mask.height());
}

}  // namespace

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  require_same(a, b, "mask_and");
  BinaryMask out(a.width(), a.height());
  auto o = out.bits();
  const auto x = a.bits();
  const auto y = b.bits();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] & y[i];
  return out;
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  require_same(a, b, "mask_or");
  BinaryMask out(a.width(), a.height());
  auto o = out.bits();
  const auto x = a.bits();
  const auto y = b.bits();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] | y[i];
  return out;
}

BinaryMask mask_not(const BinaryMask& a) {
  BinaryMask out(a.width(), a.height());
  auto o = out.bits();
  const auto x = a.bits();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] ? 0 : 1;
  return out;
}

bool is_subset(const BinaryMask& a, const BinaryMask& b) {
  require_same(a, b, "is_subset");
  const auto x = a.bits();
  const auto y = b.bits();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] && !y[i]) return false;
  }
  return true;
}

BinaryMask morph_erode(const BinaryMask& mask, int radius, bool outside) {
  if (radius < 0) throw std::invalid_argument("morphology radius must be >= 0");
  if (radius == 0) return mask;
  const Grid g = pad(mask, 0, outside);
  return unpad(morph_grid(g, radius, false, outside), 0, mask.width(), mask.height());
}

BinaryMask morph_dilate(const BinaryMask& mask, int radius, bool outside) {
  if (radius < 0) throw std::invalid_argument("morphology radius must be >= 0");
  if (radius == 0) return mask;
  const Grid g = pad(mask, 0, outside);
  return unpad(morph_grid(g, radius, true, outside), 0, mask.width(), mask.height());
}

BinaryMask morph_open(const BinaryMask& mask, int radius) {
  return morph_pair(mask, radius, /*first_dilate=*/false, /*outside=*/true);
}

BinaryMask morph_close(const BinaryMask& mask, int radius) {
  return morph_pair(mask, radius, /*first_dilate=*/true, /*outside=*/false);
}

BinaryMask crop_mask(const BinaryMask& mask, const Rect& rect) {
  if (rect.width < 1 || rect.height < 1 || rect.x < 0 || rect.y < 0 ||
      rect.x + rect.width > mask.width() || rect.y + rect.height > mask.height()) {
    throw Error(ErrorKind::OutOfBounds,
                "crop rectangle (" + std::to_string(rect.x) + "," + std::to_string(rect.y) + " " +
                    std::to_string(rect.width) + "x" + std::to_string(rect.height) +
                    ") exceeds " + std::to_string(mask.width()) + "x" +
                    std::to_string(mask.height()));
  }
  BinaryMask out(rect.width, rect.height);
  auto dst = out.bits();
  const auto src = mask.bits();
  for (int y = 0; y < rect.height; ++y) {
    std::copy_n(src.data() + static_cast<std::size_t>(rect.y + y) * mask.width() + rect.x,
                rect.width, dst.data() + static_cast<std::size_t>(y) * rect.width);
  }
  return out;
}

Components label_components(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  Components result;
  result.labels.assign(mask.size(), 0);
  const auto bits = mask.bits();
  std::vector<int> stack;
  int next = 0;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const std::size_t seed = static_cast<std::size_t>(y0) * w + x0;
      if (!bits[seed] || result.labels[seed] != 0) continue;
      ++next;
      std::size_t area = 0;
      result.labels[seed] = next;
      stack.push_back(static_cast<int>(seed));
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        ++area;
        const int x = idx % w;
        const int y = idx / w;
        for (int dy = -1; dy <= 1; ++dy) {
          const int ny = y + dy;
          if (ny < 0 || ny >= h) continue;
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx;
            if (nx < 0 || nx >= w || (dx == 0 && dy == 0)) continue;
            const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
            if (bits[n] && result.labels[n] == 0) {
              result.labels[n] = next;
              stack.push_back(static_cast<int>(n));
            }
          }
        }
      }
      result.areas.push_back(area);
    }
  }
  return result;
}

BinaryMask remove_small_components(const BinaryMask& mask, std::size_t min_area) {
  if (min_area <= 1) return mask;
  const Components cc = label_components(mask);
  BinaryMask out(mask.width(), mask.height());
  auto dst = out.bits();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const int label = cc.labels[i];
    dst[i] = (label > 0 && cc.areas[static_cast<std::size_t>(label) - 1] >= min_area) ? 1 : 0;
  }
  return out;
}

}  // namespace erysegm
