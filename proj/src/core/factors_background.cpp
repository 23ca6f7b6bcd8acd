#include "core/factors_background.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/assignment.hpp"
#include "core/error.hpp"
#include "core/factors_object.hpp"
#include "core/factors_scene.hpp"
#include "core/maskgeo.hpp"
#include "core/rng.hpp"
#include "core/sampling.hpp"

namespace segcx {

double bg_color_gradient(const SceneRecord& scene) {
  const BinaryMask bg = background_mask(scene.masks);
  if (!bg.any()) fail(ErrorCode::kEmptyBackground, "scene " + scene.id + " has no background pixels");
  return masked_color_gradient(to_grayscale(scene.image), bg);
}

namespace {

double rgb_distance(const Rgb& a, const Rgb& b) {
  const double dr = a[0] - b[0], dg = a[1] - b[1], db = a[2] - b[2];
  return std::sqrt(dr * dr + dg * dg + db * db);
}

struct ColorHistogram {
  std::vector<Rgb> colors;
  std::vector<long long> counts;
};

ColorHistogram collapse(const std::vector<Rgb>& pixels) {
  std::map<Rgb, long long> counts;
  for (const Rgb& c : pixels) ++counts[c];
  ColorHistogram h;
  for (const auto& [c, n] : counts) {
    h.colors.push_back(c);
    h.counts.push_back(n);
  }
  return h;
}

}  // namespace

double assignment_color_similarity(const std::vector<Rgb>& background, const std::vector<Rgb>& foreground) {
  if (background.empty() || foreground.empty()) fail(ErrorCode::kEmptySide, "color assignment: empty side");
  const double pairs = static_cast<double>(std::min(background.size(), foreground.size()));

  // Repeated colors are interchangeable, so the assignment collapses to a
  // transportation problem between the two color histograms.
  const ColorHistogram bg = collapse(background), fg = collapse(foreground);
  double assigned = 0.0;
  if (std::max(bg.colors.size(), fg.colors.size()) <= kExactAssignmentLimit) {
    const std::size_t rows = bg.colors.size(), cols = fg.colors.size();
    std::vector<double> cost(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) cost[r * cols + c] = kMaxColorDistance - rgb_distance(bg.colors[r], fg.colors[c]);
    }
    const Transportation t = solve_transportation(cost, bg.counts, fg.counts);
    for (std::size_t i = 0; i < t.flow.size(); ++i) {
      if (t.flow[i] != 0) {
        assigned += static_cast<double>(t.flow[i]) * rgb_distance(bg.colors[i / cols], fg.colors[i % cols]);
      }
    }
  } else {
    const std::size_t rows = background.size(), cols = foreground.size();
    std::vector<double> distance(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) distance[r * cols + c] = rgb_distance(background[r], foreground[c]);
    }
    assigned = solve_assignment_auction(distance, rows, cols).total;
  }
  return std::clamp(1.0 - assigned / pairs / kMaxColorDistance, 0.0, 1.0);
}

double bg_fg_color_similarity(const SceneRecord& scene, std::size_t budget, std::uint64_t seed) {
  const BinaryMask bg = background_mask(scene.masks);
  const BinaryMask fg = mask_complement(bg);
  if (!bg.any() || !fg.any()) fail(ErrorCode::kEmptySide, "scene " + scene.id + ": background or foreground is empty");
  Rng rng(derive_seed(seed, scene.id, 2));
  std::vector<Rgb> bg_colors, fg_colors;
  for (std::size_t p : stratified_sample(bg, budget, rng)) bg_colors.push_back(scene.image.at(p));
  for (std::size_t p : stratified_sample(fg, budget, rng)) fg_colors.push_back(scene.image.at(p));
  return assignment_color_similarity(bg_colors, fg_colors);
}

BackgroundShape bg_shape_irregularity(const SceneRecord& scene) {
  const std::vector<BinaryMask> regions = subcontour_regions(background_mask(scene.masks));
  if (regions.empty()) fail(ErrorCode::kNoRegions, "scene " + scene.id + " has no enclosed regions");
  BackgroundShape out;
  double sum = 0.0;
  for (const BinaryMask& region : regions) {
    RegionIrregularity r;
    r.area = region.count();
    r.inscribed = max_inscribed_convex_set(region).set.count();
    r.score = 1.0 - static_cast<double>(r.inscribed) / static_cast<double>(r.area);
    sum += r.score;
    out.regions.push_back(r);
  }
  out.irregularity = sum / static_cast<double>(regions.size());
  return out;
}

}  // namespace segcx
