#include "erysegm/color.hpp"

#include <array>
#include <cmath>

namespace erysegm {

namespace {

// IEC 61966-2-1 linear-sRGB to XYZ, at the precision whose row sums reproduce
// the D65 white above.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

// CIE constants in exact rational form.
constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

double srgb_decode(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

const std::array<double, 256>& linear_lut() {
  static const std::array<double, 256> lut = [] {
    std::array<double, 256> table{};
    for (int i = 0; i < 256; ++i) table[i] = srgb_decode(i / 255.0);
    return table;
  }();
  return lut;
}

Lab linear_to_lab(double r, double g, double b) {
  const double x = kRgbToXyz[0][0] * r + kRgbToXyz[0][1] * g + kRgbToXyz[0][2] * b;
  const double y = kRgbToXyz[1][0] * r + kRgbToXyz[1][1] * g + kRgbToXyz[1][2] * b;
  const double z = kRgbToXyz[2][0] * r + kRgbToXyz[2][1] * g + kRgbToXyz[2][2] * b;
  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return Lab{116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

}  // namespace

GrayImage to_grayscale(const RasterImage& image) {
  GrayImage gray(image.width(), image.height());
  const int ch = image.channels();
  const auto src = image.data();
  auto dst = gray.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const std::size_t o = i * static_cast<std::size_t>(ch);
    const double v = kLumaR * src[o] + kLumaG * src[o + 1] + kLumaB * src[o + 2];
    dst[i] = static_cast<float>(std::fmin(255.0, v));
  }
  return gray;
}

Lab srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const auto& lut = linear_lut();
  return linear_to_lab(lut[r], lut[g], lut[b]);
}

Lab srgb_to_lab(double r, double g, double b) {
  return linear_to_lab(srgb_decode(r), srgb_decode(g), srgb_decode(b));
}

LabImage srgb_to_lab(const RasterImage& image) {
  LabImage lab;
  lab.width = image.width();
  lab.height = image.height();
  const std::size_t n = image.pixel_count();
  lab.L.resize(n);
  lab.a.resize(n);
  lab.b.resize(n);
  const auto& lut = linear_lut();
  const int ch = image.channels();
  const auto src = image.data();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t o = i * static_cast<std::size_t>(ch);
    const Lab v = linear_to_lab(lut[src[o]], lut[src[o + 1]], lut[src[o + 2]]);
    lab.L[i] = static_cast<float>(v.L);
    lab.a[i] = static_cast<float>(v.a);
    lab.b[i] = static_cast<float>(v.b);
  }
  return lab;
}

}  // namespace erysegm
