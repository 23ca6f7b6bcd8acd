#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

namespace segcx::oracle {

namespace {

long long cross(Point o, Point a, Point b) {
  return static_cast<long long>(a.x - o.x) * (b.y - o.y) - static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

std::vector<std::uint16_t> gt_ids(const LabelMap& gt) {
  std::set<std::uint16_t> ids(gt.labels().begin(), gt.labels().end());
  ids.erase(0);
  return {ids.begin(), ids.end()};
}

BinaryMask label_mask(const LabelMap& labels, std::uint16_t id) {
  BinaryMask m(labels.width(), labels.height());
  for (std::size_t i = 0; i < labels.pixel_count(); ++i) m.set(i, labels[i] == id);
  return m;
}

}  // namespace

double exhaustive_assignment(const std::vector<double>& cost, std::size_t rows, std::size_t cols) {
  const bool transpose = rows > cols;
  const std::size_t small = transpose ? cols : rows, large = transpose ? rows : cols;
  const auto at = [&](std::size_t s, std::size_t l) { return transpose ? cost[l * cols + s] : cost[s * cols + l]; };
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> used(large, 0);
  std::function<void(std::size_t, double)> go = [&](std::size_t s, double acc) {
    if (s == small) {
      best = std::min(best, acc);
      return;
    }
    for (std::size_t l = 0; l < large; ++l) {
      if (used[l]) continue;
      used[l] = 1;
      go(s + 1, acc + at(s, l));
      used[l] = 0;
    }
  };
  go(0, 0.0);
  return small == 0 ? 0.0 : best;
}

double exhaustive_transportation(const std::vector<double>& cost, const std::vector<long long>& row_mass,
                                 const std::vector<long long>& col_mass) {
  std::vector<std::size_t> r_of, c_of;
  for (std::size_t r = 0; r < row_mass.size(); ++r) r_of.insert(r_of.end(), row_mass[r], r);
  for (std::size_t c = 0; c < col_mass.size(); ++c) c_of.insert(c_of.end(), col_mass[c], c);
  std::vector<double> expanded(r_of.size() * c_of.size());
  for (std::size_t i = 0; i < r_of.size(); ++i) {
    for (std::size_t j = 0; j < c_of.size(); ++j) expanded[i * c_of.size() + j] = cost[r_of[i] * col_mass.size() + c_of[j]];
  }
  return exhaustive_assignment(expanded, r_of.size(), c_of.size());
}

BinaryMask hull(const BinaryMask& mask) {
  std::vector<Point> extremes;
  int min_x = mask.width(), max_x = -1, min_y = mask.height(), max_y = -1;
  for (int y = 0; y < mask.height(); ++y) {
    int lo = -1, hi = -1;
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      if (lo < 0) lo = x;
      hi = x;
    }
    if (lo < 0) continue;
    extremes.push_back({lo, y});
    if (hi != lo) extremes.push_back({hi, y});
    min_x = std::min(min_x, lo);
    max_x = std::max(max_x, hi);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  std::vector<std::pair<Point, Point>> lines;
  for (const Point& a : extremes) {
    for (const Point& b : extremes) {
      if (a == b) continue;
      const bool supporting =
          std::all_of(extremes.begin(), extremes.end(), [&](const Point& p) { return cross(a, b, p) >= 0; });
      if (supporting) lines.emplace_back(a, b);
    }
  }
  BinaryMask out(mask.width(), mask.height());
  for (int y = min_y; y <= max_y; ++y) {
    for (int x = min_x; x <= max_x; ++x) {
      const Point p{x, y};
      out.set(x, y, std::all_of(lines.begin(), lines.end(), [&](const auto& l) { return cross(l.first, l.second, p) >= 0; }));
    }
  }
  return out;
}

bool in_convex_polygon(const std::vector<Point>& v, Point p) {
  if (v.size() == 1) return v[0] == p;
  if (v.size() == 2) {
    return cross(v[0], v[1], p) == 0 && std::min(v[0].x, v[1].x) <= p.x && p.x <= std::max(v[0].x, v[1].x) &&
           std::min(v[0].y, v[1].y) <= p.y && p.y <= std::max(v[0].y, v[1].y);
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cross(v[i], v[(i + 1) % v.size()], p) < 0) return false;
  }
  return true;
}

std::optional<double> masked_sobel_mean(const RgbImage& image, const BinaryMask& mask) {
  static constexpr int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static constexpr int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  const auto gray = [&](int x, int y) {
    const Rgb c = image.at(x, y);
    return static_cast<int>(std::floor((299.0 * c[0] + 587.0 * c[1] + 114.0 * c[2]) / 1000.0 + 0.5));
  };
  double sum = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      bool inside = true;
      for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) inside = inside && mask.test(x + i, y + j);
      }
      if (!inside) continue;
      int gx = 0, gy = 0;
      for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
          gx += kx[j][i] * gray(x + i - 1, y + j - 1);
          gy += ky[j][i] * gray(x + i - 1, y + j - 1);
        }
      }
      sum += std::hypot(gx, gy);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::vector<int> bfs_distance(const BinaryMask& domain, const BinaryMask& sources) {
  std::vector<int> d(domain.size(), -1);
  std::deque<Point> queue;
  for (int y = 0; y < domain.height(); ++y) {
    for (int x = 0; x < domain.width(); ++x) {
      if (domain.at(x, y) && sources.at(x, y)) {
        d[y * domain.width() + x] = 0;
        queue.push_back({x, y});
      }
    }
  }
  while (!queue.empty()) {
    const Point p = queue.front();
    queue.pop_front();
    const Point next[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
    for (const Point& q : next) {
      if (!domain.test(q.x, q.y) || d[q.y * domain.width() + q.x] >= 0) continue;
      d[q.y * domain.width() + q.x] = d[p.y * domain.width() + p.x] + 1;
      queue.push_back(q);
    }
  }
  return d;
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a[i] && b[i];
    uni += a[i] || b[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

std::vector<double> confidences(const SegmentationPrediction& pred) {
  std::vector<double> out;
  for (const auto& soft : pred.soft) {
    double sum = 0.0;
    std::size_t n = 0;
    for (float v : soft) {
      if (v >= 0.5f) {
        sum += v;
        ++n;
      }
    }
    out.push_back(n == 0 ? 0.0 : sum / n);
  }
  return out;
}

std::vector<BinaryMask> binarized(const SegmentationPrediction& pred) {
  std::vector<BinaryMask> out;
  for (const auto& soft : pred.soft) {
    BinaryMask m(pred.width, pred.height);
    for (std::size_t i = 0; i < soft.size(); ++i) m.set(i, soft[i] >= 0.5f);
    out.push_back(std::move(m));
  }
  return out;
}

LabelMap owner_map(const SegmentationPrediction& pred) {
  const std::vector<double> conf = confidences(pred);
  const std::vector<BinaryMask> masks = binarized(pred);
  LabelMap out(pred.width, pred.height);
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    int best = -1;
    for (std::size_t k = 0; k < masks.size(); ++k) {
      if (masks[k][i] && (best < 0 || conf[k] > conf[best])) best = static_cast<int>(k);
    }
    out[i] = static_cast<std::uint16_t>(best + 1);
  }
  return out;
}

std::optional<double> average_precision(const LabelMap& gt, const SegmentationPrediction& pred, double thr) {
  const std::vector<std::uint16_t> ids = gt_ids(gt);
  if (ids.empty()) return std::nullopt;
  const std::vector<double> conf = confidences(pred);
  const std::vector<BinaryMask> masks = binarized(pred);
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < masks.size(); ++k) {
    if (masks[k].any()) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return conf[a] > conf[b]; });

  // A prediction can exceed IoU 0.5 with at most one of the disjoint gt
  // objects, so each is a true positive iff that object is still free.
  std::vector<char> taken(ids.size(), 0);
  std::vector<double> precision, recall;
  std::size_t tp = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    for (std::size_t g = 0; g < ids.size(); ++g) {
      if (!taken[g] && iou(masks[order[rank]], label_mask(gt, ids[g])) > thr) {
        taken[g] = 1;
        ++tp;
        break;
      }
    }
    precision.push_back(static_cast<double>(tp) / (rank + 1));
    recall.push_back(static_cast<double>(tp) / ids.size());
  }
  double ap = 0.0;
  for (std::size_t j = 1; j <= ids.size(); ++j) {
    double best = 0.0;
    for (std::size_t i = 0; i < precision.size(); ++i) {
      if (recall[i] * ids.size() >= j - 1e-9) best = std::max(best, precision[i]);
    }
    ap += best / ids.size();
  }
  return ap;
}

std::optional<double> panoptic_quality(const LabelMap& gt, const SegmentationPrediction& pred, double thr) {
  const LabelMap owner = owner_map(pred);
  std::vector<BinaryMask> parts;
  for (std::size_t k = 0; k < pred.soft.size(); ++k) {
    BinaryMask m = label_mask(owner, static_cast<std::uint16_t>(k + 1));
    if (m.any()) parts.push_back(std::move(m));
  }
  const std::vector<std::uint16_t> ids = gt_ids(gt);
  double sum = 0.0;
  std::size_t tp = 0;
  for (std::uint16_t id : ids) {
    const BinaryMask g = label_mask(gt, id);
    for (const BinaryMask& p : parts) {
      const double v = iou(g, p);
      if (v > thr) {
        sum += v;
        ++tp;
      }
    }
  }
  const double denom = tp + 0.5 * (ids.size() - tp) + 0.5 * (parts.size() - tp);
  if (denom == 0.0) return std::nullopt;
  return sum / denom;
}

PairStats pair_stats(const LabelMap& gt, const LabelMap& pred, bool foreground_only) {
  PairStats s;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (foreground_only && gt[i] == 0) continue;
    for (std::size_t j = i + 1; j < gt.pixel_count(); ++j) {
      if (foreground_only && gt[j] == 0) continue;
      const bool a = gt[i] == gt[j], b = pred[i] == pred[j];
      s.total += 1;
      s.same_gt += a;
      s.same_pred += b;
      s.same_both += a && b;
    }
  }
  return s;
}

std::optional<double> ari(const LabelMap& gt, const LabelMap& pred, bool foreground_only) {
  const PairStats s = pair_stats(gt, pred, foreground_only);
  std::size_t n = 0;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) n += !foreground_only || gt[i] != 0;
  if (n == 0) return std::nullopt;
  if (s.total == 0) return 1.0;
  const double expected = s.same_gt * s.same_pred / s.total;
  const double max_index = 0.5 * (s.same_gt + s.same_pred);
  if (max_index == expected) return 1.0;
  return (s.same_both - expected) / (max_index - expected);
}

std::optional<double> arp(const LabelMap& gt, const LabelMap& pred) {
  const PairStats s = pair_stats(gt, pred, false);
  if (s.total == 0) return std::nullopt;
  const double expected = s.same_gt * s.same_pred / s.total;
  if (s.same_pred == expected) return std::nullopt;
  return (s.same_both - expected) / (s.same_pred - expected);
}

std::optional<double> arr(const LabelMap& gt, const LabelMap& pred) {
  const PairStats s = pair_stats(gt, pred, false);
  if (s.total == 0) return std::nullopt;
  const double expected = s.same_gt * s.same_pred / s.total;
  if (s.same_gt == expected) return std::nullopt;
  return (s.same_both - expected) / (s.same_gt - expected);
}

BestMatching exhaustive_matching(const LabelMap& gt, const std::vector<BinaryMask>& pred, double thr) {
  const std::vector<std::uint16_t> ids = gt_ids(gt);
  BestMatching best;
  std::vector<char> used(pred.size(), 0);
  std::function<void(std::size_t, BestMatching)> go = [&](std::size_t g, BestMatching acc) {
    if (g == ids.size()) {
      if (acc.count > best.count || (acc.count == best.count && acc.iou_sum > best.iou_sum)) best = acc;
      return;
    }
    go(g + 1, acc);
    const BinaryMask m = label_mask(gt, ids[g]);
    for (std::size_t p = 0; p < pred.size(); ++p) {
      if (used[p]) continue;
      const double v = iou(m, pred[p]);
      if (v <= thr) continue;
      used[p] = 1;
      go(g + 1, {acc.count + 1, acc.iou_sum + v});
      used[p] = 0;
    }
  };
  go(0, {});
  return best;
}

}  // namespace segcx::oracle
