#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "core/image.hpp"

namespace segcx {

// Any PNG color type is accepted on read and converted to 8-bit RGB.
RgbImage read_rgb_png(const std::filesystem::path& path);
void write_rgb_png(const std::filesystem::path& path, const RgbImage& image);

// 16-bit grayscale label map. 8-bit grayscale files are widened on read.
LabelMap read_label_png(const std::filesystem::path& path);
void write_label_png(const std::filesystem::path& path, const LabelMap& labels);

struct GrayImage8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;
};

GrayImage8 read_gray8_png(const std::filesystem::path& path);
void write_gray8_png(const std::filesystem::path& path, const GrayImage8& image);

}  // namespace segcx
