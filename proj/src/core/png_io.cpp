#include "core/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <string>

#include "core/error.hpp"

namespace segcx {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> rows;  // packed rows, big-endian for 16-bit
};

// libpng reports errors through longjmp; keep the message for the exception.
struct ErrorSink {
  std::string message;
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
  if (sink != nullptr) sink->message = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

enum class ReadMode { kRgb8, kGray };

DecodedPng decode(const std::filesystem::path& path, ReadMode mode) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) fail(ErrorCode::kMissingFile, "cannot open " + path.string());

  png_byte header[8] = {};
  if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
    fail(ErrorCode::kCorruptPng, "not a PNG file: " + path.string());
  }

  ErrorSink sink;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::kIoFailure, "libpng allocation failed");
  }

  DecodedPng out;
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::kCorruptPng, path.string() + ": " + sink.message);
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);

  if (mode == ReadMode::kRgb8) {
    if (depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(png);
    }
    png_set_strip_alpha(png);
  } else {
    if (color_type != PNG_COLOR_TYPE_GRAY) {
      png_destroy_read_struct(&png, &info, nullptr);
      fail(ErrorCode::kCorruptPng, path.string() + ": expected a grayscale PNG");
    }
    if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  }
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.rows.resize(stride * out.height);
  row_ptrs.resize(out.height);
  for (int y = 0; y < out.height; ++y) row_ptrs[y] = out.rows.data() + stride * y;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void encode(const std::filesystem::path& path, int width, int height, int color_type, int bit_depth,
            const std::uint8_t* rows, std::size_t stride) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) fail(ErrorCode::kIoFailure, "cannot write " + path.string());

  ErrorSink sink;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::kIoFailure, "libpng allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::kIoFailure, path.string() + ": " + sink.message);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(rows + stride * y));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) fail(ErrorCode::kIoFailure, "flush failed: " + path.string());
}

}  // namespace

RgbImage read_rgb_png(const std::filesystem::path& path) {
  DecodedPng png = decode(path, ReadMode::kRgb8);
  if (png.channels != 3 || png.bit_depth != 8) {
    fail(ErrorCode::kCorruptPng, path.string() + ": unsupported PNG layout");
  }
  return RgbImage(png.width, png.height, std::move(png.rows));
}

void write_rgb_png(const std::filesystem::path& path, const RgbImage& image) {
  encode(path, image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, image.data().data(),
         static_cast<std::size_t>(image.width()) * 3);
}

LabelMap read_label_png(const std::filesystem::path& path) {
  DecodedPng png = decode(path, ReadMode::kGray);
  std::vector<std::uint16_t> labels(static_cast<std::size_t>(png.width) * png.height);
  if (png.bit_depth == 16) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      labels[i] = static_cast<std::uint16_t>((png.rows[2 * i] << 8) | png.rows[2 * i + 1]);
    }
  } else {
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = png.rows[i];
  }
  return LabelMap(png.width, png.height, std::move(labels));
}

void write_label_png(const std::filesystem::path& path, const LabelMap& labels) {
  std::vector<std::uint8_t> rows(labels.pixel_count() * 2);
  for (std::size_t i = 0; i < labels.pixel_count(); ++i) {
    rows[2 * i] = static_cast<std::uint8_t>(labels[i] >> 8);
    rows[2 * i + 1] = static_cast<std::uint8_t>(labels[i] & 0xff);
  }
  encode(path, labels.width(), labels.height(), PNG_COLOR_TYPE_GRAY, 16, rows.data(),
         static_cast<std::size_t>(labels.width()) * 2);
}

GrayImage8 read_gray8_png(const std::filesystem::path& path) {
  DecodedPng png = decode(path, ReadMode::kGray);
  GrayImage8 out{png.width, png.height, {}};
  const std::size_t n = static_cast<std::size_t>(png.width) * png.height;
  out.values.resize(n);
  if (png.bit_depth == 16) {
    for (std::size_t i = 0; i < n; ++i) out.values[i] = png.rows[2 * i];
  } else {
    out.values = std::move(png.rows);
  }
  return out;
}

void write_gray8_png(const std::filesystem::path& path, const GrayImage8& image) {
  encode(path, image.width, image.height, PNG_COLOR_TYPE_GRAY, 8, image.values.data(),
         static_cast<std::size_t>(image.width));
}

}  // namespace segcx
