#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace erysegm {

/// Axis-aligned pixel rectangle, half-open: [x, x+width) x [y, y+height).
struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  long long area() const { return static_cast<long long>(width) * height; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// 8-bit interleaved RGB (or RGBA) image, row-major.
class RasterImage {
 public:
  RasterImage() = default;
  /// Zero-filled image. Throws std::invalid_argument on non-positive sizes or
  /// a channel count other than 3 or 4.
  RasterImage(int width, int height, int channels = 3);
  RasterImage(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  std::uint8_t& at(int x, int y, int c) { return data_[index(x, y, c)]; }
  std::uint8_t at(int x, int y, int c) const { return data_[index(x, y, c)]; }

  std::span<std::uint8_t> data() { return data_; }
  std::span<const std::uint8_t> data() const { return data_; }
  std::span<const std::uint8_t> row(int y) const {
    return std::span<const std::uint8_t>(data_).subspan(
        static_cast<std::size_t>(y) * width_ * channels_,
        static_cast<std::size_t>(width_) * channels_);
  }

  bool same_size(const RasterImage& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 3;
  std::vector<std::uint8_t> data_;
};

/// Single-channel luminance image, values in [0, 255] stored as float.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, float fill = 0.0f);
  GrayImage(int width, int height, std::vector<float> data);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }

  float& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  float at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  const float* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * width_; }
  float* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// CIELAB image in planar float storage.
struct LabImage {
  int width = 0;
  int height = 0;
  std::vector<float> L;
  std::vector<float> a;
  std::vector<float> b;

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

/// Per-pixel boolean mask stored one byte per pixel (0 or 1).
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool v) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
  }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }

  std::span<std::uint8_t> bits() { return bits_; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  std::size_t count() const;
  bool same_size(const BinaryMask& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  template <typename Image>
  bool matches(const Image& image) const {
    return width_ == image.width() && height_ == image.height();
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace erysegm
