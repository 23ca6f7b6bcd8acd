#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/image.hpp"
#include "core/metrics.hpp"

// Brute-force reference implementations. They favor obviousness over speed
// and share no code with the library beyond the image containers.
namespace segcx::oracle {

// Minimum total over every injection of the smaller side into the larger.
double exhaustive_assignment(const std::vector<double>& cost, std::size_t rows, std::size_t cols);

// Minimum-cost transportation by expanding masses into unit rows/columns and
// enumerating injections.
double exhaustive_transportation(const std::vector<double>& cost, const std::vector<long long>& row_mass,
                                 const std::vector<long long>& col_mass);

// Pixel centers inside the convex hull of the set pixel centers, tested
// against every supporting line through two set pixels.
BinaryMask hull(const BinaryMask& mask);

// Inside-or-on test against a positively oriented convex polygon.
bool in_convex_polygon(const std::vector<Point>& vertices, Point p);

// Mean of |Sobel| over pixels whose full 3x3 neighborhood lies in the mask.
std::optional<double> masked_sobel_mean(const RgbImage& image, const BinaryMask& mask);

// Breadth-first 4-neighbor distances; -1 for unreachable.
std::vector<int> bfs_distance(const BinaryMask& domain, const BinaryMask& sources);

double iou(const BinaryMask& a, const BinaryMask& b);

// Per-mask confidence: mean soft value over pixels with soft >= 0.5.
std::vector<double> confidences(const SegmentationPrediction& pred);
std::vector<BinaryMask> binarized(const SegmentationPrediction& pred);
// Pixel owner by max confidence, lower index on ties; 0 = none, else k + 1.
LabelMap owner_map(const SegmentationPrediction& pred);

// Area under the interpolated PR curve: mean over gt recall steps j/K of the
// best precision among confidence-ranked prefixes reaching that recall.
std::optional<double> average_precision(const LabelMap& gt, const SegmentationPrediction& pred, double thr);
std::optional<double> panoptic_quality(const LabelMap& gt, const SegmentationPrediction& pred, double thr);

struct PairStats {
  double same_gt = 0, same_pred = 0, same_both = 0, total = 0;
};
// O(n^2) enumeration over unordered pixel pairs.
PairStats pair_stats(const LabelMap& gt, const LabelMap& pred, bool foreground_only);
std::optional<double> ari(const LabelMap& gt, const LabelMap& pred, bool foreground_only);
std::optional<double> arp(const LabelMap& gt, const LabelMap& pred);
std::optional<double> arr(const LabelMap& gt, const LabelMap& pred);

struct BestMatching {
  std::size_t count = 0;
  double iou_sum = 0.0;
};
// Injection maximizing the number of pairs above `thr`, then their IoU sum.
BestMatching exhaustive_matching(const LabelMap& gt, const std::vector<BinaryMask>& pred, double thr);

}  // namespace segcx::oracle
