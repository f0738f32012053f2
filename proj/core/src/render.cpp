#include "erysegm/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "erysegm/error.hpp"

namespace erysegm {

namespace {

std::uint8_t quantise(double v) {
  return static_cast<std::uint8_t>(std::floor(std::clamp(v, 0.0, 255.0) + 0.5));
}

void fill_rect(RasterImage& img, int x0, int y0, int x1, int y1, Rgb c) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, img.width());
  y1 = std::min(y1, img.height());
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      for (int k = 0; k < 3; ++k) img.at(x, y, k) = c[static_cast<std::size_t>(k)];
    }
  }
}

}  // namespace

RasterImage render_heatmap(const DeltaMap& map, std::optional<std::pair<double, double>> scale) {
  const auto dom = map.domain.bits();
  double lo = 0.0;
  double hi = 0.0;
  if (scale) {
    lo = scale->first;
    hi = scale->second;
  } else {
    double peak = 0.0;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (dom[i]) peak = std::max(peak, std::abs(static_cast<double>(map.delta_a[i])));
    }
    lo = -peak;
    hi = peak;
  }
  RasterImage out(map.width, map.height, 3);
  auto px = out.data();
  for (std::size_t i = 0; i < dom.size(); ++i) {
    Rgb c = kOutsideDomainGray;
    if (dom[i]) {
      const double v = map.delta_a[i];
      if (v >= 0.0) {
        const double t = hi > 0.0 ? std::min(1.0, v / hi) : 0.0;
        const std::uint8_t fade = quantise(255.0 * (1.0 - t));
        c = Rgb{255, fade, fade};
      } else {
        const double t = lo < 0.0 ? std::min(1.0, v / lo) : 0.0;
        const std::uint8_t fade = quantise(255.0 * (1.0 - t));
        c = Rgb{fade, fade, 255};
      }
    }
    px[3 * i] = c[0];
    px[3 * i + 1] = c[1];
    px[3 * i + 2] = c[2];
  }
  return out;
}

RasterImage render_overlay(const RasterImage& original, const BinaryMask& mask, Rgb color,
                           double alpha) {
  if (!mask.matches(original)) {
    throw Error(ErrorKind::DimensionMismatch, "overlay mask does not match the image");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("overlay alpha must be in [0,1]");
  RasterImage out = original;
  const int ch = original.channels();
  auto px = out.data();
  const auto bits = mask.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    for (int c = 0; c < 3; ++c) {
      auto& v = px[i * static_cast<std::size_t>(ch) + c];
      v = quantise((1.0 - alpha) * v + alpha * color[static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

RasterImage render_histogram(const HistogramData& hist, int width, int height) {
  RasterImage img(width, height, 3);
  fill_rect(img, 0, 0, width, height, Rgb{255, 255, 255});
  const int left = 40;
  const int right = width - 10;
  const int top = 10;
  const int bottom = height - 30;
  fill_rect(img, left, bottom, right, bottom + 1, Rgb{0, 0, 0});
  fill_rect(img, left - 1, top, left, bottom, Rgb{0, 0, 0});
  if (hist.counts.empty()) return img;

  const double lo = hist.bin_edges.front();
  const double hi = hist.bin_edges.back();
  const double span = hi > lo ? hi - lo : 1.0;
  // Markers may fall outside the data range; extend the axis to show them.
  const double axis_lo = std::min({lo, hist.mu, hist.tau});
  const double axis_hi = std::max({lo + span, hist.mu, hist.tau});
  const double axis_span = axis_hi > axis_lo ? axis_hi - axis_lo : 1.0;
  auto to_x = [&](double v) {
    return left + static_cast<int>(std::lround((v - axis_lo) / axis_span * (right - left)));
  };
  std::size_t peak = 1;
  for (auto c : hist.counts) peak = std::max(peak, c);

  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    int x0 = to_x(hist.bin_edges[i]);
    int x1 = hi > lo ? to_x(hist.bin_edges[i + 1]) : x0 + 4;
    if (x1 <= x0) x1 = x0 + 1;
    const int h = static_cast<int>(std::lround(static_cast<double>(hist.counts[i]) / peak *
                                               (bottom - top)));
    fill_rect(img, x0, bottom - h, x1, bottom, Rgb{110, 110, 110});
  }
  const int mu_x = to_x(hist.mu);
  const int tau_x = to_x(hist.tau);
  fill_rect(img, mu_x - 1, top, mu_x + 1, bottom, Rgb{0, 0, 220});
  fill_rect(img, tau_x - 1, top, tau_x + 1, bottom, Rgb{220, 0, 0});
  return img;
}

}  // namespace erysegm
