#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace segcx {

struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

using Rgb = std::array<std::uint8_t, 3>;

// Interleaved 8-bit RGB, row-major.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {0, 0, 0});
  RgbImage(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const { return pixel_count() == 0; }

  Rgb at(int x, int y) const {
    const std::size_t i = index(x, y) * 3;
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = index(x, y) * 3;
    data_[i] = c[0];
    data_[i + 1] = c[1];
    data_[i + 2] = c[2];
  }
  Rgb at(std::size_t i) const { return {data_[3 * i], data_[3 * i + 1], data_[3 * i + 2]}; }
  void set(std::size_t i, Rgb c) {
    data_[3 * i] = c[0];
    data_[3 * i + 1] = c[1];
    data_[3 * i + 2] = c[2];
  }

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Per-pixel instance ids; 0 is background.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height, std::uint16_t fill = 0);
  LabelMap(int width, int height, std::vector<std::uint16_t> labels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return labels_.size(); }

  std::uint16_t at(int x, int y) const { return labels_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, std::uint16_t v) { labels_[static_cast<std::size_t>(y) * width_ + x] = v; }
  std::uint16_t operator[](std::size_t i) const { return labels_[i]; }
  std::uint16_t& operator[](std::size_t i) { return labels_[i]; }

  const std::vector<std::uint16_t>& labels() const { return labels_; }
  std::vector<std::uint16_t>& labels() { return labels_; }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint16_t> labels_;
};

class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  // Out-of-frame reads as unset.
  bool test(int x, int y) const { return contains(x, y) && at(x, y); }
  void set(int x, int y, bool v = true) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v = true) { bits_[i] = v ? 1 : 0; }

  std::size_t count() const;
  bool any() const;

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

BinaryMask mask_of_label(const LabelMap& labels, std::uint16_t id);
BinaryMask background_mask(const LabelMap& labels);
// a \ b
BinaryMask mask_difference(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_complement(const BinaryMask& m);
bool is_subset(const BinaryMask& inner, const BinaryMask& outer);

// Luma 0.299R + 0.587G + 0.114B rounded to nearest.
std::vector<std::uint8_t> to_grayscale(const RgbImage& image);
std::uint8_t luma(Rgb c);

RgbImage crop(const RgbImage& image, int x0, int y0, int width, int height);
LabelMap crop(const LabelMap& labels, int x0, int y0, int width, int height);

// Pixel-center aligned resampling; identical size returns an exact copy.
RgbImage resize_bilinear(const RgbImage& image, int width, int height);
LabelMap resize_nearest(const LabelMap& labels, int width, int height);

}  // namespace segcx
