#include "core/texture_bank.hpp"

#include <algorithm>

#include "core/error.hpp"
#include "core/png_io.hpp"
#include "core/rng.hpp"

namespace segcx {

namespace fs = std::filesystem;

MeanColor mean_color(const RgbImage& image) {
  MeanColor sum{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const Rgb c = image.at(i);
    for (int ch = 0; ch < 3; ++ch) sum[ch] += c[ch];
  }
  const double n = static_cast<double>(std::max<std::size_t>(image.pixel_count(), 1));
  return {sum[0] / n, sum[1] / n, sum[2] / n};
}

void TextureBank::add(RgbImage tile) {
  means.push_back(mean_color(tile));
  tiles.push_back(std::move(tile));
}

namespace {

Rgb shade(Rgb c, int delta) {
  Rgb out;
  for (int ch = 0; ch < 3; ++ch) out[ch] = static_cast<std::uint8_t>(std::clamp(c[ch] + delta, 0, 255));
  return out;
}

}  // namespace

TextureBank builtin_texture_bank() {
  static constexpr std::array<Rgb, 16> kPalette = {{
      {0, 0, 0},      {255, 255, 255}, {255, 0, 0},     {0, 255, 0},
      {0, 0, 255},    {255, 255, 0},   {255, 0, 255},   {0, 255, 255},
      {255, 128, 0},  {128, 0, 255},   {0, 128, 255},   {255, 0, 128},
      {128, 255, 0},  {0, 255, 128},   {128, 128, 128}, {128, 64, 0},
  }};
  constexpr int kSize = kMinTileSize;
  constexpr int kContrast = 70;

  TextureBank bank;
  Rng rng(0x5eedba4cULL);
  for (std::size_t t = 0; t < kPalette.size(); ++t) {
    const Rgb base = kPalette[t];
    // Bright bases get darker accents and vice versa, so accents stay visible.
    const int sum = base[0] + base[1] + base[2];
    const Rgb accent = shade(base, sum > 382 ? -kContrast : kContrast);
    RgbImage tile(kSize, kSize, base);
    for (int y = 0; y < kSize; ++y) {
      for (int x = 0; x < kSize; ++x) {
        bool on = false;
        switch (t % 4) {
          case 0:  // stripes
            on = (x / 4) % 2 == 1;
            break;
          case 1:  // checker
            on = ((x / 8) + (y / 8)) % 2 == 1;
            break;
          case 2:  // dots
            on = (x % 8 - 4) * (x % 8 - 4) + (y % 8 - 4) * (y % 8 - 4) <= 4;
            break;
          default:  // noise
            on = rng.below(2) == 1;
            break;
        }
        if (on) tile.set(x, y, accent);
      }
    }
    bank.add(std::move(tile));
  }
  return bank;
}

TextureBank load_texture_bank(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(ErrorCode::kBankMissing, "texture directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorCode::kBankMissing, "no PNG tiles in " + dir.string());
  TextureBank bank;
  for (const fs::path& f : files) {
    RgbImage tile = read_rgb_png(f);
    if (tile.width() < kMinTileSize || tile.height() < kMinTileSize) {
      fail(ErrorCode::kInvalidArgument, "texture tile smaller than 128x128: " + f.string());
    }
    bank.add(std::move(tile));
  }
  return bank;
}

}  // namespace segcx
