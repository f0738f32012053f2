#include "erysegm/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace erysegm {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image dimensions must be positive, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

RasterImage::RasterImage(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height);
  if (channels != 3 && channels != 4) {
    throw std::invalid_argument("RasterImage supports 3 or 4 channels, got " +
                                std::to_string(channels));
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, 0);
}

RasterImage::RasterImage(int width, int height, int channels, std::vector<std::uint8_t> data)
    : RasterImage(width, height, channels) {
  if (data.size() != data_.size()) {
    throw std::invalid_argument("RasterImage buffer holds " + std::to_string(data.size()) +
                                " bytes, expected " + std::to_string(data_.size()));
  }
  data_ = std::move(data);
}

GrayImage::GrayImage(int width, int height, float fill) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("GrayImage buffer size does not match dimensions");
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width, height);
  if (bits_.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("BinaryMask buffer size does not match dimensions");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

}  // namespace erysegm
