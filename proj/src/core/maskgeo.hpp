#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "core/image.hpp"

namespace segcx {

enum class Connectivity { kFour = 4, kEight = 8 };

struct BoundingBox {
  int min_x = 0;
  int min_y = 0;
  int max_x = -1;
  int max_y = -1;

  int width() const { return max_x - min_x + 1; }
  int height() const { return max_y - min_y + 1; }
  long long area() const { return static_cast<long long>(width()) * height(); }
};

struct ConvexHullResult {
  BinaryMask hull;
  // Strictly convex vertices over pixel centers, positively oriented.
  std::vector<Point> vertices;
};

/// Smallest convex polygon over the pixel centers of `mask`, rasterized so a
/// pixel is inside when its center lies inside or on the polygon boundary.
/// Throws EmptyMask for an empty input.
ConvexHullResult convex_hull(const BinaryMask& mask);

// Exact integer rasterization of a convex polygon given by positively
// oriented vertices (1 or 2 vertices describe a point or segment).
BinaryMask rasterize_convex_polygon(const std::vector<Point>& vertices, int width, int height);

struct ComponentLabels {
  std::vector<int> label;          // -1 for unset pixels, else component index
  std::vector<std::size_t> sizes;  // indexed by component
  std::vector<std::size_t> seeds;  // first pixel (raster order) of each component
};

// Components indexed in raster order of their first pixel.
ComponentLabels label_components(const BinaryMask& mask, Connectivity connectivity);

/// Maximal connected sets ordered by decreasing pixel count, then by the
/// raster position of their top-left-most pixel.
std::vector<BinaryMask> connected_components(const BinaryMask& mask, Connectivity connectivity);

BinaryMask largest_component(const BinaryMask& mask, Connectivity connectivity);

/// Regions enclosed by the background's contour: the 4-connected components
/// of the background complement, in connected_components order.
std::vector<BinaryMask> subcontour_regions(const BinaryMask& background);

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// 4-neighbor geodesic distance from `sources` with paths restricted to
/// `domain`. Pixels outside the domain or not reachable get kUnreachable.
/// Sources outside the domain are ignored. Throws EmptyDomain.
std::vector<int> constrained_distance_transform(const BinaryMask& domain, const BinaryMask& sources);

struct Concavity {
  Point location;
  int depth = 0;  // kUnreachable for enclosed holes
};

// Deepest pixel of the convex deficiency, depth measured as 4-neighbor steps
// from outside the hull (pixels on the hull lid have depth 1). depth 0 when
// the mask equals its hull.
Concavity deepest_concavity(const BinaryMask& mask);

inline constexpr int kConvexDepthThreshold = 3;

// The module's convexity test: deepest concavity no deeper than 3.
bool is_depth_convex(const BinaryMask& mask);

struct InscribedConvexSet {
  BinaryMask set;
  int iterations = 0;
};

/// Approximate maximal inscribed convex subset of a 4-connected region.
///
/// Repeatedly locates the deepest concavity of the convex deficiency and cuts
/// the region along one of 8 rays (multiples of 45 degrees) from it, removing
/// the smaller side. The cut removing the fewest pixels wins, ties going to
/// the lowest direction index. Stops once the deepest concavity is at most 3
/// steps deep. Throws EmptyRegion or Disconnected.
InscribedConvexSet max_inscribed_convex_set(const BinaryMask& region);

BoundingBox bounding_box(const BinaryMask& mask);

// One pass removes every pixel with an unset (or out-of-frame) 8-neighbor.
BinaryMask erode_boundary(const BinaryMask& mask, int width);

// Mask pixels that have an unset or out-of-frame 8-neighbor.
BinaryMask boundary_pixels(const BinaryMask& mask);

}  // namespace segcx
