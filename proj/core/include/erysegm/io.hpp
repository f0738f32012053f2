#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "erysegm/image.hpp"

namespace erysegm {

enum class ImageFormat { Png, Jpeg };

struct LoadInfo {
  ImageFormat format = ImageFormat::Png;
  int source_channels = 3;  ///< channels stored in the file (1..4)
  bool had_alpha = false;   ///< alpha was present and has been dropped
};

/// Decodes an 8-bit PNG or baseline JPEG as sRGB-encoded RGB. Grayscale
/// files are replicated to three channels; alpha is dropped and reported in
/// `info`. 16-bit and palette PNGs raise ErrorKind::UnsupportedFormat.
RasterImage load_image(const std::filesystem::path& path, LoadInfo* info = nullptr);

/// Undecoded-channel view of an 8-bit PNG, used for label maps.
struct PngPixels {
  int width = 0;
  int height = 0;
  int channels = 0;  ///< 1 gray, 2 gray+alpha, 3 rgb, 4 rgba
  std::vector<std::uint8_t> data;
};

/// Reads an 8-bit (or packed sub-byte gray) PNG without any channel
/// conversion. Sub-byte gray values are unpacked, not rescaled.
PngPixels load_png_pixels(const std::filesystem::path& path);

/// Writes a lossless 8-bit PNG. RGBA images keep their alpha channel.
void encode_png(const RasterImage& image, const std::filesystem::path& path);

/// Writes a single-channel 8-bit PNG from a row-major byte buffer.
void encode_gray_png(int width, int height, const std::vector<std::uint8_t>& values,
                     const std::filesystem::path& path);

/// Writes a mask as a single-channel PNG with values 0 / 255.
void encode_mask_png(const BinaryMask& mask, const std::filesystem::path& path);

/// Reads a mask PNG (any nonzero sample in the first channel is true).
BinaryMask load_mask_png(const std::filesystem::path& path);

}  // namespace erysegm
