#include "erysegm/io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

// jpeglib.h expects size_t/FILE to be declared first.
#include <jpeglib.h>

#include "erysegm/error.hpp"

namespace erysegm {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_for_read(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorKind::FileNotFound, path.string());
  }
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string() + ": " + std::strerror(errno));
  return f;
}

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

struct PngErrorState {
  char message[256] = {};
};

[[noreturn]] void png_error_handler(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof(state->message), "%s", msg);
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

enum class PngReadMode { Rgb, Raw };

struct PngHeader {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  int channels = 0;
  bool had_alpha = false;
};

// Returns an empty string on success, otherwise a reason. `unsupported` is set
// when the failure is a format restriction rather than a damaged stream. The
// function owns no objects with destructors so longjmp out of libpng is safe.
std::string read_png(std::FILE* file, PngReadMode mode, PngHeader& header,
                     std::vector<std::uint8_t>& pixels, std::vector<png_bytep>& rows,
                     bool& unsupported) {
  PngErrorState state;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, png_error_handler, png_warning_handler);
  if (png == nullptr) return "libpng initialisation failed";
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return "libpng initialisation failed";
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return state.message[0] != '\0' ? state.message : "corrupt PNG stream";
  }

  png_init_io(png, file);
  png_read_info(png, info);
  png_get_IHDR(png, info, &header.width, &header.height, &header.bit_depth, &header.color_type,
               nullptr, nullptr, nullptr);

  if (header.bit_depth == 16) {
    unsupported = true;
    png_destroy_read_struct(&png, &info, nullptr);
    return "16-bit PNG is not supported";
  }
  if (header.color_type == PNG_COLOR_TYPE_PALETTE) {
    unsupported = true;
    png_destroy_read_struct(&png, &info, nullptr);
    return "indexed (palette) PNG is not supported";
  }
  if (header.width > 0x7fffffffu / 8 || header.height > 0x7fffffffu / 8) {
    unsupported = true;
    png_destroy_read_struct(&png, &info, nullptr);
    return "PNG dimensions too large";
  }

  header.had_alpha = (header.color_type & PNG_COLOR_MASK_ALPHA) != 0;
  if (header.bit_depth < 8) png_set_packing(png);
  if (mode == PngReadMode::Rgb) {
    if (header.bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (header.had_alpha) png_set_strip_alpha(png);
    if ((header.color_type & PNG_COLOR_MASK_COLOR) == 0) png_set_gray_to_rgb(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) {
    // Transparency chunks are ignored: alpha never feeds the colorimetry.
    png_free_data(png, info, PNG_FREE_TRNS, -1);
  }
  png_read_update_info(png, info);
  header.channels = png_get_channels(png, info);
  const png_size_t rowbytes = png_get_rowbytes(png, info);

  pixels.resize(rowbytes * header.height);
  rows.resize(header.height);
  for (png_uint_32 y = 0; y < header.height; ++y) rows[y] = pixels.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return {};
}

std::string write_png(std::FILE* file, int width, int height, int color_type,
                      const std::vector<png_bytep>& rows) {
  PngErrorState state;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, png_error_handler,
                                            png_warning_handler);
  if (png == nullptr) return "libpng initialisation failed";
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return "libpng initialisation failed";
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return state.message[0] != '\0' ? state.message : "PNG write failed";
  }
  png_init_io(png, file);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return {};
}

void write_png_file(const std::filesystem::path& path, int width, int height, int color_type,
                    const std::uint8_t* data, std::size_t row_stride) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path.string() + ": " + std::strerror(errno));
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(data + static_cast<std::size_t>(y) * row_stride);
  }
  const std::string err = write_png(f.get(), width, height, color_type, rows);
  if (!err.empty()) throw Error(ErrorKind::Io, path.string() + ": " + err);
  if (std::fflush(f.get()) != 0) {
    throw Error(ErrorKind::Io, "cannot flush " + path.string() + ": " + std::strerror(errno));
  }
}

// ---------------------------------------------------------------------------
// JPEG
// ---------------------------------------------------------------------------

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX] = {};
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, mgr->message);
  std::longjmp(mgr->jump, 1);
}

void jpeg_silent(j_common_ptr, int) {}

std::string read_jpeg(std::FILE* file, int& width, int& height,
                      std::vector<std::uint8_t>& pixels, bool& unsupported) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.emit_message = jpeg_silent;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    return err.message[0] != '\0' ? err.message : "corrupt JPEG stream";
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file);
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.jpeg_color_space == JCS_CMYK || cinfo.jpeg_color_space == JCS_YCCK) {
    unsupported = true;
    jpeg_destroy_decompress(&cinfo);
    return "CMYK JPEG is not supported";
  }
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  const std::size_t stride = static_cast<std::size_t>(width) * 3;
  pixels.resize(stride * static_cast<std::size_t>(height));
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return {};
}

ImageFormat sniff(std::FILE* file, const std::filesystem::path& path) {
  unsigned char sig[8] = {};
  const std::size_t n = std::fread(sig, 1, sizeof(sig), file);
  std::rewind(file);
  if (n == 8 && png_sig_cmp(sig, 0, 8) == 0) return ImageFormat::Png;
  if (n >= 3 && sig[0] == 0xFF && sig[1] == 0xD8 && sig[2] == 0xFF) return ImageFormat::Jpeg;
  throw Error(ErrorKind::UnsupportedFormat, path.string() + ": not a PNG or JPEG file");
}

}  // namespace

RasterImage load_image(const std::filesystem::path& path, LoadInfo* info) {
  FilePtr f = open_for_read(path);
  const ImageFormat format = sniff(f.get(), path);
  bool unsupported = false;

  if (format == ImageFormat::Jpeg) {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
    const std::string err = read_jpeg(f.get(), width, height, pixels, unsupported);
    if (!err.empty()) {
      throw Error(unsupported ? ErrorKind::UnsupportedFormat : ErrorKind::CorruptStream,
                  path.string() + ": " + err);
    }
    if (info != nullptr) *info = LoadInfo{ImageFormat::Jpeg, 3, false};
    return RasterImage(width, height, 3, std::move(pixels));
  }

  PngHeader header;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  const std::string err = read_png(f.get(), PngReadMode::Rgb, header, pixels, rows, unsupported);
  if (!err.empty()) {
    throw Error(unsupported ? ErrorKind::UnsupportedFormat : ErrorKind::CorruptStream,
                path.string() + ": " + err);
  }
  if (info != nullptr) {
    const int stored = ((header.color_type & PNG_COLOR_MASK_COLOR) ? 3 : 1) +
                       (header.had_alpha ? 1 : 0);
    *info = LoadInfo{ImageFormat::Png, stored, header.had_alpha};
  }
  return RasterImage(static_cast<int>(header.width), static_cast<int>(header.height), 3,
                     std::move(pixels));
}

PngPixels load_png_pixels(const std::filesystem::path& path) {
  FilePtr f = open_for_read(path);
  if (sniff(f.get(), path) != ImageFormat::Png) {
    throw Error(ErrorKind::UnsupportedFormat, path.string() + ": expected a PNG file");
  }
  PngHeader header;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  bool unsupported = false;
  const std::string err = read_png(f.get(), PngReadMode::Raw, header, pixels, rows, unsupported);
  if (!err.empty()) {
    throw Error(unsupported ? ErrorKind::UnsupportedFormat : ErrorKind::CorruptStream,
                path.string() + ": " + err);
  }
  return PngPixels{static_cast<int>(header.width), static_cast<int>(header.height),
                   header.channels, std::move(pixels)};
}

void encode_png(const RasterImage& image, const std::filesystem::path& path) {
  if (image.empty()) throw Error(ErrorKind::Io, "cannot encode an empty image to " + path.string());
  const int color_type = image.channels() == 4 ? PNG_COLOR_TYPE_RGB_ALPHA : PNG_COLOR_TYPE_RGB;
  write_png_file(path, image.width(), image.height(), color_type, image.data().data(),
                 static_cast<std::size_t>(image.width()) * image.channels());
}

void encode_gray_png(int width, int height, const std::vector<std::uint8_t>& values,
                     const std::filesystem::path& path) {
  if (width < 1 || height < 1 ||
      values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorKind::Io, "gray buffer does not match dimensions for " + path.string());
  }
  write_png_file(path, width, height, PNG_COLOR_TYPE_GRAY, values.data(),
                 static_cast<std::size_t>(width));
}

void encode_mask_png(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> values(mask.size());
  const auto bits = mask.bits();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = bits[i] ? 255 : 0;
  encode_gray_png(mask.width(), mask.height(), values, path);
}

BinaryMask load_mask_png(const std::filesystem::path& path) {
  PngPixels px = load_png_pixels(path);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(px.width) * px.height);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    bits[i] = px.data[i * static_cast<std::size_t>(px.channels)] != 0 ? 1 : 0;
  }
  return BinaryMask(px.width, px.height, std::move(bits));
}

}  // namespace erysegm
