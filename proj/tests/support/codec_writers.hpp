#pragma once

// Writers for file variants the library itself never produces.

#include <cstdint>
#include <filesystem>
#include <vector>

namespace fixture {

/// 8-bit PNG with 1 (gray), 2 (gray+alpha), 3 or 4 channels.
void write_png8(const std::filesystem::path& path, int width, int height, int channels,
                const std::vector<std::uint8_t>& data);
/// 16-bit RGB PNG.
void write_png16(const std::filesystem::path& path, int width, int height);
/// Palette (indexed) PNG.
void write_png_palette(const std::filesystem::path& path, int width, int height);
/// Baseline JPEG of an RGB buffer.
void write_jpeg(const std::filesystem::path& path, int width, int height,
                const std::vector<std::uint8_t>& rgb, int quality = 95);

}  // namespace fixture
