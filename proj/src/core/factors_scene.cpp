#include "core/factors_scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "core/error.hpp"
#include "core/maskgeo.hpp"
#include "core/rng.hpp"
#include "core/sampling.hpp"

namespace segcx {

namespace {

void require_pairs(const SceneRecord& scene, const char* what) {
  if (scene.object_count() < 2) {
    fail(ErrorCode::kTooFewObjects, std::string(what) + ": scene " + scene.id + " has fewer than two objects");
  }
}

struct Accumulated {
  double r = 0.0, g = 0.0, b = 0.0;
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
};

// Per-object sums in inventory order.
std::vector<Accumulated> accumulate(const SceneRecord& scene) {
  std::map<std::uint16_t, std::size_t> slot;
  for (std::size_t k = 0; k < scene.objects.size(); ++k) slot[scene.objects[k].id] = k;
  std::vector<Accumulated> acc(scene.objects.size());
  const int w = scene.masks.width();
  for (std::size_t i = 0; i < scene.masks.pixel_count(); ++i) {
    const std::uint16_t id = scene.masks[i];
    if (id == 0) continue;
    Accumulated& a = acc[slot.at(id)];
    const Rgb c = scene.image.at(i);
    a.r += c[0];
    a.g += c[1];
    a.b += c[2];
    a.sx += static_cast<double>(i % w);
    a.sy += static_cast<double>(i / w);
    ++a.n;
  }
  return acc;
}

double color_distance(const Rgb& a, const Rgb& b) {
  const double dr = a[0] - b[0], dg = a[1] - b[1], db = a[2] - b[2];
  return std::sqrt(dr * dr + dg * dg + db * db);
}

// Exact squared Euclidean distance to the nearest set pixel (separable lower
// envelope of parabolas, two 1-D passes).
std::vector<double> squared_distance_to(const BinaryMask& sources) {
  const int w = sources.width(), h = sources.height();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> grid(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = sources[i] ? 0.0 : inf;

  const int n_max = std::max(w, h);
  std::vector<double> f(n_max), d(n_max), z(n_max + 1);
  std::vector<int> v(n_max);
  const auto pass = [&](int n) {
    int k = 0;
    int first = -1;
    for (int q = 0; q < n; ++q) {
      if (std::isfinite(f[q])) {
        first = q;
        break;
      }
    }
    if (first < 0) {
      std::fill(d.begin(), d.begin() + n, inf);
      return;
    }
    v[0] = first;
    z[0] = -inf;
    z[1] = inf;
    for (int q = first + 1; q < n; ++q) {
      if (!std::isfinite(f[q])) continue;
      const auto intersect = [&](int p) {
        return ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
      };
      double s = intersect(v[k]);
      while (s <= z[k]) s = intersect(v[--k]);
      ++k;
      v[k] = q;
      z[k] = s;
      z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
      while (z[k + 1] < q) ++k;
      const double dq = q - v[k];
      d[q] = dq * dq + f[v[k]];
    }
  };

  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
    pass(h);
    for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = d[y];
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[x] = grid[static_cast<std::size_t>(y) * w + x];
    pass(w);
    for (int x = 0; x < w; ++x) grid[static_cast<std::size_t>(y) * w + x] = d[x];
  }
  return grid;
}

struct WeightedColor {
  Rgb color;
  double weight;
};

std::vector<WeightedColor> unique_colors(const std::vector<Rgb>& pixels) {
  std::map<Rgb, std::size_t> counts;
  for (const Rgb& c : pixels) ++counts[c];
  std::vector<WeightedColor> out;
  out.reserve(counts.size());
  for (const auto& [c, n] : counts) out.push_back({c, static_cast<double>(n)});
  return out;
}

// Weighted mean and max of nearest distances from a to b.
std::pair<double, double> directed(const std::vector<WeightedColor>& a, const std::vector<WeightedColor>& b) {
  double sum = 0.0, total = 0.0, worst = 0.0;
  for (const WeightedColor& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const WeightedColor& q : b) best = std::min(best, color_distance(p.color, q.color));
    sum += best * p.weight;
    total += p.weight;
    worst = std::max(worst, best);
  }
  return {sum / total, worst};
}

}  // namespace

double inter_object_color_similarity(const SceneRecord& scene) {
  require_pairs(scene, "color similarity");
  const std::vector<Accumulated> acc = accumulate(scene);
  const std::size_t k = acc.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double ni = static_cast<double>(acc[i].n), nj = static_cast<double>(acc[j].n);
      const double dr = acc[i].r / ni - acc[j].r / nj;
      const double dg = acc[i].g / ni - acc[j].g / nj;
      const double db = acc[i].b / ni - acc[j].b / nj;
      sum += std::sqrt(dr * dr + dg * dg + db * db);
    }
  }
  const double mean = sum / (static_cast<double>(k) * (k - 1) / 2.0);
  return std::clamp(1.0 - mean / kMaxColorDistance, 0.0, 1.0);
}

double inter_object_shape_variation(const SceneRecord& scene) {
  require_pairs(scene, "shape variation");
  const std::size_t k = scene.objects.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double dw = scene.objects[i].box.width() - scene.objects[j].box.width();
      const double dh = scene.objects[i].box.height() - scene.objects[j].box.height();
      sum += std::hypot(dw, dh);
    }
  }
  return sum / (static_cast<double>(k) * (k - 1) / 2.0);
}

ColorSetDistance color_set_distance(const std::vector<Rgb>& a, const std::vector<Rgb>& b) {
  if (a.empty() || b.empty()) fail(ErrorCode::kEmptyMask, "color set distance: empty set");
  const std::vector<WeightedColor> ua = unique_colors(a), ub = unique_colors(b);
  const auto [mean_ab, max_ab] = directed(ua, ub);
  const auto [mean_ba, max_ba] = directed(ub, ua);
  return {(mean_ab + mean_ba) / 2.0, (max_ab + max_ba) / 2.0};
}

BinaryMask unit_box_boundary(const BinaryMask& mask) {
  const BinaryMask edge = boundary_pixels(mask);
  const BoundingBox box = bounding_box(mask);
  const double scale = static_cast<double>(kUnitBoxSize) / std::max(box.width(), box.height());
  const double off_x = (kUnitBoxSize - box.width() * scale) / 2.0;
  const double off_y = (kUnitBoxSize - box.height() * scale) / 2.0;

  BinaryMask out(kUnitBoxSize, kUnitBoxSize);
  // Forward: every boundary pixel marks the cell its center lands in.
  for (int y = box.min_y; y <= box.max_y; ++y) {
    for (int x = box.min_x; x <= box.max_x; ++x) {
      if (!edge.at(x, y)) continue;
      const int u = std::clamp(static_cast<int>(std::floor(off_x + (x - box.min_x + 0.5) * scale)), 0, kUnitBoxSize - 1);
      const int v = std::clamp(static_cast<int>(std::floor(off_y + (y - box.min_y + 0.5) * scale)), 0, kUnitBoxSize - 1);
      out.set(u, v);
    }
  }
  // Inverse nearest: fills the gaps left when enlarging.
  for (int v = 0; v < kUnitBoxSize; ++v) {
    for (int u = 0; u < kUnitBoxSize; ++u) {
      const double sx = (u + 0.5 - off_x) / scale, sy = (v + 0.5 - off_y) / scale;
      if (sx < 0.0 || sy < 0.0 || sx >= box.width() || sy >= box.height()) continue;
      if (edge.at(box.min_x + static_cast<int>(sx), box.min_y + static_cast<int>(sy))) out.set(u, v);
    }
  }
  return out;
}

double label_entropy(const LabelMap& labels) {
  const int w = labels.width(), h = labels.height();
  double total = 0.0;
  std::size_t n = 0;
  std::array<std::uint16_t, 9> values{};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int count = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx >= 0 && yy >= 0 && xx < w && yy < h) values[count++] = labels.at(xx, yy);
        }
      }
      std::sort(values.begin(), values.begin() + count);
      double e = 0.0;
      for (int i = 0; i < count;) {
        int j = i;
        while (j < count && values[j] == values[i]) ++j;
        const double p = static_cast<double>(j - i) / count;
        e -= p * std::log2(p);
        i = j;
      }
      if (e > 0.0) {
        total += e;
        ++n;
      }
    }
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

SceneCandidates scene_candidate_factors(const SceneRecord& scene, std::uint64_t seed) {
  require_pairs(scene, "scene candidates");
  const std::size_t k = scene.objects.size();
  const std::vector<Accumulated> acc = accumulate(scene);

  std::vector<BinaryMask> masks;
  masks.reserve(k);
  for (const ObjectInfo& obj : scene.objects) masks.push_back(mask_of_label(scene.masks, obj.id));

  Rng rng(derive_seed(seed, scene.id, 1));
  std::vector<std::vector<Rgb>> colors(k);
  std::vector<BinaryMask> shapes(k);
  std::vector<std::vector<double>> distance(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t p : stratified_sample(masks[i], kColorSetBudget, rng)) colors[i].push_back(scene.image.at(p));
    shapes[i] = unit_box_boundary(masks[i]);
    distance[i] = squared_distance_to(masks[i]);
  }

  const auto mean_distance_to = [&](std::size_t from, std::size_t to) {
    double sum = 0.0;
    for (std::size_t p = 0; p < masks[from].size(); ++p) {
      if (masks[from][p]) sum += std::sqrt(distance[to][p]);
    }
    return sum / static_cast<double>(acc[from].n);
  };

  SceneCandidates out;
  double chamfer = 0.0, hausdorff = 0.0, iou = 0.0;
  const double pairs = static_cast<double>(k) * (k - 1) / 2.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const ColorSetDistance d = color_set_distance(colors[i], colors[j]);
      chamfer += d.chamfer;
      hausdorff += d.hausdorff;

      std::size_t inter = 0, uni = 0;
      for (std::size_t p = 0; p < shapes[i].size(); ++p) {
        inter += shapes[i][p] && shapes[j][p];
        uni += shapes[i][p] || shapes[j][p];
      }
      iou += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);

      const double ni = static_cast<double>(acc[i].n), nj = static_cast<double>(acc[j].n);
      out.centroid_proximity += std::hypot(acc[i].sx / ni - acc[j].sx / nj, acc[i].sy / ni - acc[j].sy / nj);
      out.chamfer_proximity += (mean_distance_to(i, j) + mean_distance_to(j, i)) / 2.0;
      out.area_variation += std::abs(ni - nj);
    }
  }
  out.chamfer_color_similarity = std::clamp(1.0 - chamfer / pairs / kMaxColorDistance, 0.0, 1.0);
  out.hausdorff_color_similarity = std::clamp(1.0 - hausdorff / pairs / kMaxColorDistance, 0.0, 1.0);
  out.boundary_shape_similarity = iou / pairs;
  out.shape_entropy = label_entropy(scene.masks);
  out.centroid_proximity /= pairs;
  out.chamfer_proximity /= pairs;
  out.area_variation /= pairs;
  return out;
}

}  // namespace segcx
