#include "core/factors_object.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <set>

#include "core/error.hpp"
#include "core/maskgeo.hpp"

namespace segcx {

double sobel_magnitude(std::span<const std::uint8_t> gray, int width, int x, int y) {
  const auto g = [&](int dx, int dy) {
    return static_cast<int>(gray[static_cast<std::size_t>(y + dy) * width + (x + dx)]);
  };
  const int gx = (g(1, -1) + 2 * g(1, 0) + g(1, 1)) - (g(-1, -1) + 2 * g(-1, 0) + g(-1, 1));
  const int gy = (g(-1, 1) + 2 * g(0, 1) + g(1, 1)) - (g(-1, -1) + 2 * g(0, -1) + g(1, -1));
  return std::sqrt(static_cast<double>(gx * gx + gy * gy));
}

double masked_color_gradient(std::span<const std::uint8_t> gray, const BinaryMask& mask) {
  if (!mask.any()) fail(ErrorCode::kEmptyMask, "color gradient: empty mask");
  const BinaryMask interior = erode_boundary(mask, 1);
  double sum = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < interior.height(); ++y) {
    for (int x = 0; x < interior.width(); ++x) {
      if (!interior.at(x, y)) continue;
      sum += sobel_magnitude(gray, mask.width(), x, y);
      ++n;
    }
  }
  if (n == 0) fail(ErrorCode::kEmptyAfterErosion, "color gradient: nothing left after boundary removal");
  return sum / static_cast<double>(n);
}

double object_color_gradient(const RgbImage& image, const BinaryMask& mask) {
  if (image.width() != mask.width() || image.height() != mask.height()) {
    fail(ErrorCode::kDimensionMismatch, "color gradient: image and mask sizes differ");
  }
  const std::vector<std::uint8_t> gray = to_grayscale(image);
  return masked_color_gradient(gray, mask);
}

double object_shape_concavity(const BinaryMask& mask) {
  const std::size_t n = mask.count();
  if (n == 0) fail(ErrorCode::kEmptyMask, "shape concavity: empty mask");
  if (n < 3) return 0.0;
  const std::size_t hull = convex_hull(mask).hull.count();
  return 1.0 - static_cast<double>(n) / static_cast<double>(hull);
}

MarchingSquaresShape marching_squares_shape(const BinaryMask& mask) {
  constexpr double kHalfDiagonal = std::numbers::sqrt2 / 2.0;
  MarchingSquaresShape out;
  for (int y = -1; y < mask.height(); ++y) {
    for (int x = -1; x < mask.width(); ++x) {
      const bool a = mask.test(x, y), b = mask.test(x + 1, y);
      const bool c = mask.test(x, y + 1), d = mask.test(x + 1, y + 1);
      const int set = a + b + c + d;
      switch (set) {
        case 1:
          out.area += 0.125;
          out.perimeter += kHalfDiagonal;
          break;
        case 2:
          if (a == d) {  // diagonal pair, joined
            out.area += 0.75;
            out.perimeter += 2.0 * kHalfDiagonal;
          } else {
            out.area += 0.5;
            out.perimeter += 1.0;
          }
          break;
        case 3:
          out.area += 0.875;
          out.perimeter += kHalfDiagonal;
          break;
        case 4:
          out.area += 1.0;
          break;
        default:
          break;
      }
    }
  }
  return out;
}

double object_color_entropy(std::span<const std::uint8_t> gray, const BinaryMask& mask) {
  const int w = mask.width();
  double total = 0.0;
  std::size_t n = 0;
  std::array<std::uint8_t, 9> values{};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      int count = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (mask.test(x + dx, y + dy)) values[count++] = gray[static_cast<std::size_t>(y + dy) * w + (x + dx)];
        }
      }
      double h = 0.0;
      for (int i = 0; i < count; ++i) {
        bool seen = false;
        for (int j = 0; j < i && !seen; ++j) seen = values[j] == values[i];
        if (seen) continue;
        int occurrences = 0;
        for (int j = i; j < count; ++j) occurrences += values[j] == values[i];
        const double p = static_cast<double>(occurrences) / count;
        h -= p * std::log2(p);
      }
      total += h;
      ++n;
    }
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

ObjectCandidates object_candidate_factors(const RgbImage& image, const BinaryMask& mask) {
  if (image.width() != mask.width() || image.height() != mask.height()) {
    fail(ErrorCode::kDimensionMismatch, "candidate factors: image and mask sizes differ");
  }
  const std::size_t n = mask.count();
  if (n == 0) fail(ErrorCode::kEmptyMask, "candidate factors: empty mask");

  ObjectCandidates out;

  std::set<std::uint32_t> colors;
  double sx = 0.0, sy = 0.0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      const Rgb c = image.at(x, y);
      colors.insert((static_cast<std::uint32_t>(c[0]) << 16) | (c[1] << 8) | c[2]);
      sx += x;
      sy += y;
    }
  }
  out.color_count = colors.size();

  const std::vector<std::uint8_t> gray = to_grayscale(image);
  out.color_entropy = object_color_entropy(gray, mask);

  const BoundingBox box = bounding_box(mask);
  out.non_rectangularity = 1.0 - static_cast<double>(n) / static_cast<double>(box.area());

  const MarchingSquaresShape shape = marching_squares_shape(mask);
  const double pp = 4.0 * std::numbers::pi * shape.area / (shape.perimeter * shape.perimeter);
  out.incompactness = std::clamp(1.0 - pp, 0.0, 1.0);

  const std::size_t lcc = largest_component(mask, Connectivity::kEight).count();
  out.discontinuity = 1.0 - static_cast<double>(lcc) / static_cast<double>(n);

  const double cx = sx / n, cy = sy / n;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      const double dx = x - cx, dy = y - cy;
      out.decentralization += dx * dx * dy * dy;
    }
  }
  return out;
}

}  // namespace segcx
