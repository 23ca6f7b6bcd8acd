#include "core/maskgeo.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "core/error.hpp"

namespace segcx {

namespace {

long long cross(Point o, Point a, Point b) {
  return static_cast<long long>(a.x - o.x) * (b.y - o.y) - static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

constexpr std::array<Point, 4> kFourSteps{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
constexpr std::array<Point, 8> kEightSteps{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

// Ray directions n*pi/4 for n = 0..7, y axis pointing up.
constexpr std::array<Point, 8> kRayDirections{{{1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

BinaryMask crop_padded(const BinaryMask& mask, const BoundingBox& box, int pad) {
  BinaryMask out(box.width() + 2 * pad, box.height() + 2 * pad);
  for (int y = box.min_y; y <= box.max_y; ++y) {
    for (int x = box.min_x; x <= box.max_x; ++x) {
      if (mask.at(x, y)) out.set(x - box.min_x + pad, y - box.min_y + pad);
    }
  }
  return out;
}

}  // namespace

BinaryMask rasterize_convex_polygon(const std::vector<Point>& vertices, int width, int height) {
  BinaryMask out(width, height);
  if (vertices.empty()) return out;
  int min_x = vertices[0].x, max_x = vertices[0].x, min_y = vertices[0].y, max_y = vertices[0].y;
  for (const Point& v : vertices) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  const std::size_t n = vertices.size();
  for (int y = std::max(min_y, 0); y <= std::min(max_y, height - 1); ++y) {
    long long lo = min_x, hi = max_x;
    bool empty_row = false;
    if (n >= 2) {
      for (std::size_t i = 0; i < n && !empty_row; ++i) {
        const Point a = vertices[i];
        const Point b = vertices[(i + 1) % n];
        const long long dx = b.x - a.x, dy = b.y - a.y;
        const long long rhs = dx * (y - a.y);
        // Inside iff dx*(y-ay) - dy*(x-ax) >= 0.
        if (dy > 0) {
          hi = std::min(hi, a.x + floor_div(rhs, dy));
        } else if (dy < 0) {
          lo = std::max(lo, a.x + ceil_div(rhs, dy));
        } else if (rhs < 0) {
          empty_row = true;
        }
      }
    }
    if (empty_row) continue;
    lo = std::max<long long>(lo, 0);
    hi = std::min<long long>(hi, width - 1);
    for (long long x = lo; x <= hi; ++x) out.set(static_cast<int>(x), y);
  }
  return out;
}

ConvexHullResult convex_hull(const BinaryMask& mask) {
  // Only the extreme pixels of each row can be hull vertices.
  std::vector<Point> pts;
  for (int y = 0; y < mask.height(); ++y) {
    int first = -1, last = -1;
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y)) {
        if (first < 0) first = x;
        last = x;
      }
    }
    if (first < 0) continue;
    pts.push_back({first, y});
    if (last != first) pts.push_back({last, y});
  }
  if (pts.empty()) fail(ErrorCode::kEmptyMask, "convex_hull: empty mask");

  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Point> hull;
  if (pts.size() <= 2) {
    hull = pts;
  } else {
    // Andrew's monotone chain, dropping collinear points.
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (const Point& p : pts) {
      while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
      h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
      while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
      h[k++] = pts[i];
    }
    h.resize(k - 1);
    hull = std::move(h);
  }

  ConvexHullResult result;
  result.hull = rasterize_convex_polygon(hull, mask.width(), mask.height());
  result.vertices = std::move(hull);
  return result;
}

ComponentLabels label_components(const BinaryMask& mask, Connectivity connectivity) {
  const int w = mask.width(), h = mask.height();
  ComponentLabels out;
  out.label.assign(mask.size(), -1);
  std::vector<std::size_t> stack;
  const bool eight = connectivity == Connectivity::kEight;
  for (std::size_t seed = 0; seed < mask.size(); ++seed) {
    if (!mask[seed] || out.label[seed] >= 0) continue;
    const int id = static_cast<int>(out.sizes.size());
    std::size_t size = 0;
    out.label[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      ++size;
      const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
      const auto visit = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) return;
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        if (mask[j] && out.label[j] < 0) {
          out.label[j] = id;
          stack.push_back(j);
        }
      };
      if (eight) {
        for (const Point& s : kEightSteps) visit(x + s.x, y + s.y);
      } else {
        for (const Point& s : kFourSteps) visit(x + s.x, y + s.y);
      }
    }
    out.sizes.push_back(size);
    out.seeds.push_back(seed);
  }
  return out;
}

std::vector<BinaryMask> connected_components(const BinaryMask& mask, Connectivity connectivity) {
  const ComponentLabels labels = label_components(mask, connectivity);
  std::vector<std::size_t> order(labels.sizes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Component indices already follow raster order of seeds.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return labels.sizes[a] > labels.sizes[b]; });
  std::vector<int> rank(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r);

  std::vector<BinaryMask> out(order.size(), BinaryMask(mask.width(), mask.height()));
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (labels.label[i] >= 0) out[rank[labels.label[i]]].set(i);
  }
  return out;
}

BinaryMask largest_component(const BinaryMask& mask, Connectivity connectivity) {
  const ComponentLabels labels = label_components(mask, connectivity);
  BinaryMask out(mask.width(), mask.height());
  if (labels.sizes.empty()) return out;
  const auto best = static_cast<int>(std::max_element(labels.sizes.begin(), labels.sizes.end()) - labels.sizes.begin());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (labels.label[i] == best) out.set(i);
  }
  return out;
}

std::vector<BinaryMask> subcontour_regions(const BinaryMask& background) {
  return connected_components(mask_complement(background), Connectivity::kFour);
}

std::vector<int> constrained_distance_transform(const BinaryMask& domain, const BinaryMask& sources) {
  if (!domain.any()) fail(ErrorCode::kEmptyDomain, "constrained_distance_transform: empty domain");
  if (sources.width() != domain.width() || sources.height() != domain.height()) {
    fail(ErrorCode::kDimensionMismatch, "constrained_distance_transform: size mismatch");
  }
  const int w = domain.width(), h = domain.height();
  std::vector<int> dist(domain.size(), kUnreachable);
  std::vector<std::size_t> queue;
  queue.reserve(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i] && sources[i]) {
      dist[i] = 0;
      queue.push_back(i);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t i = queue[head];
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    for (const Point& s : kFourSteps) {
      const int nx = x + s.x, ny = y + s.y;
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
      if (domain[j] && dist[j] == kUnreachable) {
        dist[j] = dist[i] + 1;
        queue.push_back(j);
      }
    }
  }
  return dist;
}

namespace {

Concavity deepest_concavity_with_hull(const BinaryMask& mask, const BinaryMask& hull) {
  const BinaryMask deficiency = mask_difference(hull, mask);
  Concavity best;
  if (!deficiency.any()) return best;
  const int w = mask.width();
  // The lid: deficiency pixels touching the hull exterior (or the frame edge).
  BinaryMask lid(mask.width(), mask.height());
  for (std::size_t i = 0; i < deficiency.size(); ++i) {
    if (!deficiency[i]) continue;
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    for (const Point& s : kFourSteps) {
      if (!hull.test(x + s.x, y + s.y)) {
        lid.set(i);
        break;
      }
    }
  }
  const std::vector<int> dist = constrained_distance_transform(deficiency, lid);
  bool found = false;
  for (std::size_t i = 0; i < deficiency.size(); ++i) {
    if (!deficiency[i]) continue;
    const int depth = dist[i] == kUnreachable ? kUnreachable : dist[i] + 1;
    if (!found || depth > best.depth) {
      best.depth = depth;
      best.location = {static_cast<int>(i % w), static_cast<int>(i / w)};
      found = true;
    }
  }
  return best;
}

}  // namespace

Concavity deepest_concavity(const BinaryMask& mask) {
  return deepest_concavity_with_hull(mask, convex_hull(mask).hull);
}

bool is_depth_convex(const BinaryMask& mask) {
  if (!mask.any()) return true;
  return deepest_concavity(mask).depth <= kConvexDepthThreshold;
}

InscribedConvexSet max_inscribed_convex_set(const BinaryMask& region) {
  if (!region.any()) fail(ErrorCode::kEmptyRegion, "max_inscribed_convex_set: empty region");
  if (label_components(region, Connectivity::kFour).sizes.size() != 1) {
    fail(ErrorCode::kDisconnected, "max_inscribed_convex_set: region is not 4-connected");
  }

  // Work on a tight canvas with a one-pixel margin so the hull exterior exists.
  const BoundingBox box = bounding_box(region);
  constexpr int kPad = 1;
  BinaryMask current = crop_padded(region, box, kPad);
  const int w = current.width(), h = current.height();
  const std::size_t max_iterations = region.count();

  InscribedConvexSet result;
  std::vector<std::size_t> ray;
  while (true) {
    const BinaryMask hull = convex_hull(current).hull;
    const Concavity dc = deepest_concavity_with_hull(current, hull);
    if (dc.depth <= kConvexDepthThreshold) break;
    if (static_cast<std::size_t>(result.iterations) >= max_iterations) break;

    const std::size_t area = current.count();
    std::size_t best_cost = 0;
    BinaryMask best;
    bool best_is_split = false;

    for (const Point& dir : kRayDirections) {
      ray.clear();
      for (int x = dc.location.x + dir.x, y = dc.location.y + dir.y; hull.test(x, y); x += dir.x, y += dir.y) {
        if (current.at(x, y)) ray.push_back(static_cast<std::size_t>(y) * w + x);
      }
      if (ray.empty()) continue;

      BinaryMask cut = current;
      for (std::size_t i : ray) cut.set(i, false);
      const ComponentLabels parts = label_components(cut, Connectivity::kFour);

      if (parts.sizes.size() >= 2) {
        // Keep the largest side; on equal sizes the side with the smaller
        // top-left pixel is the one removed.
        int keep = 0;
        for (int c = 1; c < static_cast<int>(parts.sizes.size()); ++c) {
          if (parts.sizes[c] >= parts.sizes[keep]) keep = c;
        }
        BinaryMask kept(w, h);
        for (std::size_t i = 0; i < kept.size(); ++i) {
          if (parts.label[i] == keep) kept.set(i);
        }
        for (std::size_t i : ray) kept.set(i);
        kept = largest_component(kept, Connectivity::kFour);
        const std::size_t cost = area - kept.count();
        if (cost > 0 && (!best_is_split || cost < best_cost)) {
          best_cost = cost;
          best = std::move(kept);
          best_is_split = true;
        }
      } else if (!best_is_split && (best.size() == 0 || ray.size() < best_cost)) {
        // No split along this ray: removing the ray itself still opens the
        // concavity (enclosed holes need this).
        best_cost = ray.size();
        best = largest_component(cut, Connectivity::kFour);
      }
    }

    if (best.size() == 0) {
      // No ray meets the region; drop the region pixel nearest the concavity.
      std::size_t nearest = 0;
      long long nearest_d2 = -1;
      for (std::size_t i = 0; i < current.size(); ++i) {
        if (!current[i]) continue;
        const long long dx = static_cast<long long>(i % w) - dc.location.x;
        const long long dy = static_cast<long long>(i / w) - dc.location.y;
        if (nearest_d2 < 0 || dx * dx + dy * dy < nearest_d2) {
          nearest_d2 = dx * dx + dy * dy;
          nearest = i;
        }
      }
      best = current;
      best.set(nearest, false);
      best = largest_component(best, Connectivity::kFour);
    }
    current = std::move(best);
    ++result.iterations;
    if (!current.any()) break;
  }

  result.set = BinaryMask(region.width(), region.height());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (current.at(x, y)) result.set.set(x + box.min_x - kPad, y + box.min_y - kPad);
    }
  }
  return result;
}

BoundingBox bounding_box(const BinaryMask& mask) {
  BoundingBox box{mask.width(), mask.height(), -1, -1};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      box.min_x = std::min(box.min_x, x);
      box.min_y = std::min(box.min_y, y);
      box.max_x = std::max(box.max_x, x);
      box.max_y = std::max(box.max_y, y);
    }
  }
  if (box.max_x < 0) fail(ErrorCode::kEmptyMask, "bounding_box: empty mask");
  return box;
}

BinaryMask boundary_pixels(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      for (const Point& s : kEightSteps) {
        if (!mask.test(x + s.x, y + s.y)) {
          out.set(x, y);
          break;
        }
      }
    }
  }
  return out;
}

BinaryMask erode_boundary(const BinaryMask& mask, int width) {
  if (width < 0) fail(ErrorCode::kInvalidArgument, "erode_boundary: negative width");
  BinaryMask current = mask;
  for (int pass = 0; pass < width; ++pass) current = mask_difference(current, boundary_pixels(current));
  return current;
}

}  // namespace segcx
