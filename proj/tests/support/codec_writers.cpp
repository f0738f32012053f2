#include "codec_writers.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>

#include <jpeglib.h>
#include <png.h>

namespace fixture {

namespace {

void write_simplified(const std::filesystem::path& path, png_image& image, const void* buffer,
                      const void* colormap) {
  if (png_image_write_to_file(&image, path.c_str(), 0, buffer, 0, colormap) == 0) {
    throw std::runtime_error(std::string("png write failed: ") + image.message);
  }
}

}  // namespace

void write_png8(const std::filesystem::path& path, int width, int height, int channels,
                const std::vector<std::uint8_t>& data) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  switch (channels) {
    case 1: image.format = PNG_FORMAT_GRAY; break;
    case 2: image.format = PNG_FORMAT_GA; break;
    case 3: image.format = PNG_FORMAT_RGB; break;
    default: image.format = PNG_FORMAT_RGBA; break;
  }
  write_simplified(path, image, data.data(), nullptr);
}

void write_png16(const std::filesystem::path& path, int width, int height) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_LINEAR_RGB;
  std::vector<std::uint16_t> data(static_cast<std::size_t>(width) * height * 3, 40000);
  write_simplified(path, image, data.data(), nullptr);
}

void write_png_palette(const std::filesystem::path& path, int width, int height) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_RGB_COLORMAP;
  image.colormap_entries = 2;
  const std::uint8_t colormap[6] = {255, 0, 0, 0, 0, 255};
  std::vector<std::uint8_t> idx(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i % 2;
  write_simplified(path, image, idx.data(), colormap);
}

void write_jpeg(const std::filesystem::path& path, int width, int height,
                const std::vector<std::uint8_t>& rgb, int quality) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("cannot open " + path.string());
  jpeg_compress_struct cinfo;
  jpeg_error_mgr jerr;
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, f);
  cinfo.image_width = static_cast<JDIMENSION>(width);
  cinfo.image_height = static_cast<JDIMENSION>(height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(rgb.data() + static_cast<std::size_t>(cinfo.next_scanline) * width * 3);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::fclose(f);
}

}  // namespace fixture
