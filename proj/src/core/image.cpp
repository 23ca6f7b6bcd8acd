#include "core/image.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace segcx {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    fail(ErrorCode::kInvalidArgument, "image dimensions must be positive");
  }
}

}  // namespace

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  check_dims(width, height);
  data_.resize(pixel_count() * 3);
  for (std::size_t i = 0; i < pixel_count(); ++i) set(i, fill);
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != pixel_count() * 3) {
    fail(ErrorCode::kDimensionMismatch, "rgb buffer length does not match width*height*3");
  }
}

LabelMap::LabelMap(int width, int height, std::uint16_t fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  labels_.assign(static_cast<std::size_t>(width) * height, fill);
}

LabelMap::LabelMap(int width, int height, std::vector<std::uint16_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  check_dims(width, height);
  if (labels_.size() != static_cast<std::size_t>(width) * height) {
    fail(ErrorCode::kDimensionMismatch, "label buffer length does not match width*height");
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryMask::any() const {
  return std::find(bits_.begin(), bits_.end(), std::uint8_t{1}) != bits_.end();
}

BinaryMask mask_of_label(const LabelMap& labels, std::uint16_t id) {
  BinaryMask m(labels.width(), labels.height());
  for (std::size_t i = 0; i < labels.pixel_count(); ++i) {
    if (labels[i] == id) m.set(i);
  }
  return m;
}

BinaryMask background_mask(const LabelMap& labels) { return mask_of_label(labels, 0); }

BinaryMask mask_difference(const BinaryMask& a, const BinaryMask& b) {
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, a[i] && !b[i]);
  return out;
}

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, a[i] || b[i]);
  return out;
}

BinaryMask mask_complement(const BinaryMask& m) {
  BinaryMask out(m.width(), m.height());
  for (std::size_t i = 0; i < m.size(); ++i) out.set(i, !m[i]);
  return out;
}

bool is_subset(const BinaryMask& inner, const BinaryMask& outer) {
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner[i] && !outer[i]) return false;
  }
  return true;
}

std::uint8_t luma(Rgb c) {
  // Fixed-point 0.299/0.587/0.114 with round-half-up; exact for 8-bit inputs.
  const int v = 299 * c[0] + 587 * c[1] + 114 * c[2];
  return static_cast<std::uint8_t>((v + 500) / 1000);
}

std::vector<std::uint8_t> to_grayscale(const RgbImage& image) {
  std::vector<std::uint8_t> gray(image.pixel_count());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = luma(image.at(i));
  return gray;
}

RgbImage crop(const RgbImage& image, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || x0 + width > image.width() || y0 + height > image.height()) {
    fail(ErrorCode::kInvalidArgument, "crop window exceeds image bounds");
  }
  RgbImage out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.set(x, y, image.at(x0 + x, y0 + y));
  }
  return out;
}

LabelMap crop(const LabelMap& labels, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || x0 + width > labels.width() || y0 + height > labels.height()) {
    fail(ErrorCode::kInvalidArgument, "crop window exceeds label map bounds");
  }
  LabelMap out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.set(x, y, labels.at(x0 + x, y0 + y));
  }
  return out;
}

RgbImage resize_bilinear(const RgbImage& image, int width, int height) {
  if (width == image.width() && height == image.height()) return image;
  RgbImage out(width, height);
  const double sx = static_cast<double>(image.width()) / width;
  const double sy = static_cast<double>(image.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, image.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, image.width() - 1);
      const double wx = fx - x0;
      const Rgb a = image.at(x0, y0), b = image.at(x1, y0);
      const Rgb c = image.at(x0, y1), d = image.at(x1, y1);
      Rgb px;
      for (int ch = 0; ch < 3; ++ch) {
        const double top = a[ch] * (1 - wx) + b[ch] * wx;
        const double bottom = c[ch] * (1 - wx) + d[ch] * wx;
        px[ch] = static_cast<std::uint8_t>(std::lround(top * (1 - wy) + bottom * wy));
      }
      out.set(x, y, px);
    }
  }
  return out;
}

LabelMap resize_nearest(const LabelMap& labels, int width, int height) {
  if (width == labels.width() && height == labels.height()) return labels;
  LabelMap out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = static_cast<int>((2LL * y + 1) * labels.height() / (2LL * height));
    for (int x = 0; x < width; ++x) {
      const int sx = static_cast<int>((2LL * x + 1) * labels.width() / (2LL * width));
      out.set(x, y, labels.at(sx, sy));
    }
  }
  return out;
}

}  // namespace segcx
