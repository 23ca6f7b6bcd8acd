#pragma once

#include <cstdint>

#include "core/dataset.hpp"

namespace segcx {

inline constexpr double kMaxColorDistance = 441.67295593006370;  // 255 * sqrt(3)

/// 1 - mean pairwise distance between per-object mean colors / (255 sqrt 3).
/// Throws TooFewObjects when the scene has fewer than two objects.
double inter_object_color_similarity(const SceneRecord& scene);

/// Mean norm of the pairwise differences between bounding-box diagonal
/// vectors (width, height). Throws TooFewObjects.
double inter_object_shape_variation(const SceneRecord& scene);

struct SceneCandidates {
  double chamfer_color_similarity = 0.0;
  double hausdorff_color_similarity = 0.0;
  double boundary_shape_similarity = 0.0;
  double shape_entropy = 0.0;
  double centroid_proximity = 0.0;
  double chamfer_proximity = 0.0;
  double area_variation = 0.0;
};

inline constexpr std::size_t kColorSetBudget = 1024;
inline constexpr int kUnitBoxSize = 32;

// Color-set distances between two RGB pixel multisets, each averaged over
// both directions.
struct ColorSetDistance {
  double chamfer = 0.0;
  double hausdorff = 0.0;
};
ColorSetDistance color_set_distance(const std::vector<Rgb>& a, const std::vector<Rgb>& b);

// Boundary of `mask` cropped to its box and scaled, keeping the aspect ratio,
// into a centered kUnitBoxSize square.
BinaryMask unit_box_boundary(const BinaryMask& mask);

// Mean over pixels with non-zero value of the 3x3 label entropy (bits).
double label_entropy(const LabelMap& labels);

/// All seven exploratory scene factors. Color sets are subsampled to at most
/// kColorSetBudget pixels per object with a generator derived from `seed`.
/// Throws TooFewObjects.
SceneCandidates scene_candidate_factors(const SceneRecord& scene, std::uint64_t seed);

}  // namespace segcx
