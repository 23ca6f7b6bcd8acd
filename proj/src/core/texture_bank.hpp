#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "core/image.hpp"

namespace segcx {

inline constexpr int kMinTileSize = 128;

using MeanColor = std::array<double, 3>;

MeanColor mean_color(const RgbImage& image);

struct TextureBank {
  std::vector<RgbImage> tiles;
  std::vector<MeanColor> means;

  std::size_t size() const { return tiles.size(); }
  void add(RgbImage tile);
};

// 16 procedural 128x128 tiles (stripes, checkers, dots, noise) over a palette
// spread across the RGB cube.
TextureBank builtin_texture_bank();

/// Every *.png in `dir` (non-recursive, sorted by file name). Throws
/// BankMissing for a missing or empty directory and InvalidArgument for tiles
/// smaller than kMinTileSize.
TextureBank load_texture_bank(const std::filesystem::path& dir);

}  // namespace segcx
