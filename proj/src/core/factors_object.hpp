#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/image.hpp"

namespace segcx {

// Sobel magnitude at (x, y) of a grayscale plane; the 3x3 support must lie
// inside the frame.
double sobel_magnitude(std::span<const std::uint8_t> gray, int width, int x, int y);

/// Mean Sobel gradient magnitude of the grayscale image over the mask after a
/// one-pixel boundary erosion (so the kernel never reads outside the mask).
/// Throws EmptyMask, or EmptyAfterErosion when the object is too thin.
double object_color_gradient(const RgbImage& image, const BinaryMask& mask);

// Same as above with a precomputed grayscale plane.
double masked_color_gradient(std::span<const std::uint8_t> gray, const BinaryMask& mask);

/// 1 - |mask| / |hull|, or 0 for masks with fewer than 3 pixels.
double object_shape_concavity(const BinaryMask& mask);

struct MarchingSquaresShape {
  double area = 0.0;       // enclosed by the contour through pixel centers
  double perimeter = 0.0;  // contour length
};

// 8-connected foreground: saddle cells join their diagonal pixels.
MarchingSquaresShape marching_squares_shape(const BinaryMask& mask);

struct ObjectCandidates {
  std::size_t color_count = 0;
  double color_entropy = 0.0;  // bits, mean over mask pixels
  double non_rectangularity = 0.0;
  double incompactness = 0.0;
  double discontinuity = 0.0;
  double decentralization = 0.0;  // sum (x - cx)^2 (y - cy)^2
};

// Per-pixel Shannon entropy of grayscale values inside the 3x3 neighborhood
// intersected with the mask, averaged over the mask.
double object_color_entropy(std::span<const std::uint8_t> gray, const BinaryMask& mask);

ObjectCandidates object_candidate_factors(const RgbImage& image, const BinaryMask& mask);

}  // namespace segcx
