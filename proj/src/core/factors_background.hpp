#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "core/dataset.hpp"

namespace segcx {

/// Mean Sobel magnitude over the background after a one-pixel boundary
/// erosion. Throws EmptyBackground or EmptyAfterErosion.
double bg_color_gradient(const SceneRecord& scene);

inline constexpr std::size_t kDefaultPixelBudget = 2048;
// Largest number of distinct colors per side solved exactly (as a
// transportation problem over color histograms); beyond it the auction solver
// runs on the pixel-level matrix with a 1e-6 certified total.
inline constexpr std::size_t kExactAssignmentLimit = 256;

// Similarity from two explicit pixel color sets: the assignment maximizing
// the summed distance over min(U, V) pairs, reported as
// 1 - mean assigned distance / (255 sqrt 3). Throws EmptySide.
double assignment_color_similarity(const std::vector<Rgb>& background, const std::vector<Rgb>& foreground);

/// Background-foreground color similarity with at most `budget` sampled
/// pixels per side (0 keeps every pixel). Throws EmptySide.
double bg_fg_color_similarity(const SceneRecord& scene, std::size_t budget, std::uint64_t seed);

struct RegionIrregularity {
  std::size_t area = 0;       // A_i
  std::size_t inscribed = 0;  // C_i
  double score = 0.0;         // 1 - C_i / A_i
};

struct BackgroundShape {
  double irregularity = 0.0;
  std::vector<RegionIrregularity> regions;
};

/// Mean of 1 - C_i / A_i over the regions enclosed by the background contour.
/// Throws NoRegions when the scene has no foreground.
BackgroundShape bg_shape_irregularity(const SceneRecord& scene);

}  // namespace segcx
