#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/dataset.hpp"
#include "core/image.hpp"

namespace segcx {

inline constexpr double kBinarizeThreshold = 0.5;
inline constexpr double kDefaultIouThreshold = 0.5;

// Soft predictions of one scene.
struct SegmentationPrediction {
  int width = 0;
  int height = 0;
  std::vector<std::vector<float>> soft;  // per mask, values in [0, 1]
  std::optional<BinaryMask> background;  // explicit background, if predicted
};

struct BinarizedPrediction {
  std::vector<BinaryMask> masks;  // soft >= 0.5, may overlap
  std::vector<double> confidence;  // mean soft value over the binarized support
};

BinarizedPrediction binarize(const SegmentationPrediction& pred);

/// Non-overlapping partition: each pixel goes to the highest-confidence mask
/// covering it (ties to the lower index). Label k + 1 is mask k; 0 means no
/// mask covers the pixel.
LabelMap resolve_overlaps(const BinarizedPrediction& pred, int width, int height);

struct MatchPair {
  std::uint16_t gt = 0;
  std::size_t pred = 0;
  double iou = 0.0;
};

struct MatchResult {
  std::vector<MatchPair> pairs;
  std::vector<std::uint16_t> unmatched_gt;
  std::vector<std::size_t> unmatched_pred;
};

/// One-to-one matching in decreasing IoU order among pairs with IoU above
/// `threshold` (ties by gt id, then prediction index). Empty prediction masks
/// never match. Throws DimensionMismatch.
MatchResult match_instances(const LabelMap& gt, const std::vector<BinaryMask>& pred,
                            double threshold = kDefaultIouThreshold);

// Missing (nullopt) results mark scores that are undefined for the scene.
std::optional<double> average_precision(const LabelMap& gt, const BinarizedPrediction& pred,
                                        double threshold = kDefaultIouThreshold);
std::optional<double> panoptic_quality(const LabelMap& gt, const BinarizedPrediction& pred,
                                       double threshold = kDefaultIouThreshold);

struct PrecisionRecall {
  std::optional<double> precision;
  std::optional<double> recall;
};
PrecisionRecall precision_recall(const LabelMap& gt, const BinarizedPrediction& pred,
                                 double threshold = kDefaultIouThreshold);

// 1 if the predicted background overlaps the true one with IoU above the
// threshold, else 0; missing when the scene has no background.
std::optional<double> bg_recall(const LabelMap& gt, const BinaryMask& pred_background,
                                double threshold = kDefaultIouThreshold);

// Pair-counting ARI between two pixel partitions. With `foreground_only`
// pixels whose gt label is 0 are skipped. When the chance-corrected
// denominator vanishes (both partitions trivial) the result is 1. The raw
// value lies in [-1, 1].
std::optional<double> adjusted_rand(const LabelMap& gt, const LabelMap& pred, bool foreground_only);

// Chance-corrected pair precision/recall: with S same-gt pairs, P same-pred
// pairs, I pairs sharing both, T all pairs and E = S P / T,
// ARP = (I - E) / (P - E) and ARR = (I - E) / (S - E); missing when the
// denominator is zero.
struct RandPrecisionRecall {
  std::optional<double> arp;
  std::optional<double> arr;
};
RandPrecisionRecall rand_precision_recall(const LabelMap& gt, const LabelMap& pred);

std::optional<double> mean_best_overlap(const LabelMap& gt, const std::vector<BinaryMask>& pred);

struct MetricSelection {
  bool ap = false, pq = false, pr = false, ari = false, fgari = false, arp_arr = false, mbo = false,
       bg_recall = false;
};

// Comma-separated list of ap,pq,pr,ari,fgari,arp-arr,mbo,bg-recall or all.
// Throws InvalidArgument on unknown names.
MetricSelection parse_metric_selection(const std::string& list);

// Metric names in report order, restricted to the selection.
std::vector<std::string> selected_metric_names(const MetricSelection& selection);

struct SceneMetrics {
  std::string id;
  std::vector<std::pair<std::string, std::optional<double>>> values;  // report order
};

SceneMetrics evaluate_scene(const std::string& id, const LabelMap& gt, const SegmentationPrediction& pred,
                            const MetricSelection& selection, double threshold = kDefaultIouThreshold);

/// Reads <dir>/<id>/<k>.png soft masks (k = 0, 1, ...; 8-bit gray scaled by
/// 1/255) and an optional bg.png. A missing directory yields no masks.
SegmentationPrediction load_prediction(const std::filesystem::path& dir, const std::string& id, int width,
                                       int height);

inline constexpr int kMetricsReportVersion = 1;

struct EvaluateConfig {
  MetricSelection selection;
  double iou_threshold = kDefaultIouThreshold;
  int jobs = 1;
};

/// Scores every scene of `dataset` against `pred_dir` and returns the
/// metrics.json document (per-scene records, corpus means and population
/// standard deviations over scenes with a defined value).
nlohmann::json evaluate_dataset(const DatasetManifest& dataset, const std::filesystem::path& pred_dir,
                                const EvaluateConfig& config);

}  // namespace segcx
