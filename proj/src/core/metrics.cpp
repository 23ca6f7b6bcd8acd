#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/png_io.hpp"

namespace segcx {

namespace fs = std::filesystem;

namespace {

using Wide = __int128;

void check_dims(const LabelMap& gt, int width, int height) {
  if (gt.width() != width || gt.height() != height) {
    fail(ErrorCode::kDimensionMismatch, "prediction " + std::to_string(width) + "x" + std::to_string(height) +
                                            " vs ground truth " + std::to_string(gt.width()) + "x" +
                                            std::to_string(gt.height()));
  }
}

// Intersection counts between every prediction and every gt object.
struct Overlaps {
  std::vector<std::uint16_t> gt_ids;
  std::vector<std::size_t> gt_size;
  std::vector<std::size_t> pred_size;
  std::vector<std::vector<std::size_t>> inter;  // [pred][gt]

  double iou(std::size_t p, std::size_t g) const {
    const std::size_t i = inter[p][g];
    const std::size_t u = pred_size[p] + gt_size[g] - i;
    return u == 0 ? 0.0 : static_cast<double>(i) / static_cast<double>(u);
  }
};

Overlaps overlaps(const LabelMap& gt, const std::vector<BinaryMask>& pred) {
  Overlaps o;
  std::map<std::uint16_t, std::size_t> slot;
  for (std::uint16_t l : gt.labels()) {
    if (l != 0) slot.emplace(l, 0);
  }
  for (auto& [id, index] : slot) {
    index = o.gt_ids.size();
    o.gt_ids.push_back(id);
  }
  std::vector<int> gt_index(gt.pixel_count(), -1);
  o.gt_size.assign(o.gt_ids.size(), 0);
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (gt[i] == 0) continue;
    const std::size_t g = slot[gt[i]];
    gt_index[i] = static_cast<int>(g);
    ++o.gt_size[g];
  }
  o.pred_size.assign(pred.size(), 0);
  o.inter.assign(pred.size(), std::vector<std::size_t>(o.gt_ids.size(), 0));
  for (std::size_t p = 0; p < pred.size(); ++p) {
    check_dims(gt, pred[p].width(), pred[p].height());
    for (std::size_t i = 0; i < pred[p].size(); ++i) {
      if (!pred[p][i]) continue;
      ++o.pred_size[p];
      if (gt_index[i] >= 0) ++o.inter[p][gt_index[i]];
    }
  }
  return o;
}

MatchResult greedy_match(const Overlaps& o, double threshold) {
  struct Candidate {
    double iou;
    std::size_t g, p;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < o.pred_size.size(); ++p) {
    for (std::size_t g = 0; g < o.gt_ids.size(); ++g) {
      const double iou = o.iou(p, g);
      if (iou > threshold) candidates.push_back({iou, g, p});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.g != b.g) return a.g < b.g;
    return a.p < b.p;
  });
  std::vector<char> gt_used(o.gt_ids.size(), 0), pred_used(o.pred_size.size(), 0);
  MatchResult out;
  for (const Candidate& c : candidates) {
    if (gt_used[c.g] || pred_used[c.p]) continue;
    gt_used[c.g] = pred_used[c.p] = 1;
    out.pairs.push_back({o.gt_ids[c.g], c.p, c.iou});
  }
  for (std::size_t g = 0; g < gt_used.size(); ++g) {
    if (!gt_used[g]) out.unmatched_gt.push_back(o.gt_ids[g]);
  }
  for (std::size_t p = 0; p < pred_used.size(); ++p) {
    if (!pred_used[p]) out.unmatched_pred.push_back(p);
  }
  return out;
}

// Non-empty masks of a binarized prediction, with their confidences.
BinarizedPrediction non_empty(const BinarizedPrediction& pred) {
  BinarizedPrediction out;
  for (std::size_t k = 0; k < pred.masks.size(); ++k) {
    if (!pred.masks[k].any()) continue;
    out.masks.push_back(pred.masks[k]);
    out.confidence.push_back(pred.confidence[k]);
  }
  return out;
}

std::vector<BinaryMask> masks_of_partition(const LabelMap& partition, std::size_t count) {
  std::vector<BinaryMask> out(count, BinaryMask(partition.width(), partition.height()));
  for (std::size_t i = 0; i < partition.pixel_count(); ++i) {
    if (partition[i] != 0) out[partition[i] - 1].set(i);
  }
  std::erase_if(out, [](const BinaryMask& m) { return !m.any(); });
  return out;
}

Wide pairs(std::size_t n) { return static_cast<Wide>(n) * (static_cast<Wide>(n) - 1) / 2; }

struct PairCounts {
  std::size_t n = 0;
  Wide same_gt = 0;    // S
  Wide same_pred = 0;  // P
  Wide same_both = 0;  // I
  Wide total = 0;      // T
};

PairCounts pair_counts(const LabelMap& gt, const LabelMap& pred, bool foreground_only) {
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    fail(ErrorCode::kDimensionMismatch, "partition sizes differ");
  }
  std::map<std::pair<std::uint16_t, std::uint16_t>, std::size_t> joint;
  std::map<std::uint16_t, std::size_t> rows, cols;
  PairCounts c;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    if (foreground_only && gt[i] == 0) continue;
    ++joint[{gt[i], pred[i]}];
    ++rows[gt[i]];
    ++cols[pred[i]];
    ++c.n;
  }
  for (const auto& [k, v] : joint) c.same_both += pairs(v);
  for (const auto& [k, v] : rows) c.same_gt += pairs(v);
  for (const auto& [k, v] : cols) c.same_pred += pairs(v);
  c.total = pairs(c.n);
  return c;
}

double ratio(Wide num, Wide den) { return static_cast<double>(static_cast<long double>(num) / den); }

}  // namespace

BinarizedPrediction binarize(const SegmentationPrediction& pred) {
  BinarizedPrediction out;
  for (const std::vector<float>& soft : pred.soft) {
    BinaryMask m(pred.width, pred.height);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < soft.size(); ++i) {
      if (soft[i] >= kBinarizeThreshold) {
        m.set(i);
        sum += soft[i];
        ++n;
      }
    }
    out.masks.push_back(std::move(m));
    out.confidence.push_back(n == 0 ? 0.0 : sum / static_cast<double>(n));
  }
  return out;
}

LabelMap resolve_overlaps(const BinarizedPrediction& pred, int width, int height) {
  LabelMap out(width, height, 0);
  std::vector<double> best(out.pixel_count(), -1.0);
  for (std::size_t k = 0; k < pred.masks.size(); ++k) {
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
      if (pred.masks[k][i] && pred.confidence[k] > best[i]) {
        best[i] = pred.confidence[k];
        out[i] = static_cast<std::uint16_t>(k + 1);
      }
    }
  }
  return out;
}

MatchResult match_instances(const LabelMap& gt, const std::vector<BinaryMask>& pred, double threshold) {
  return greedy_match(overlaps(gt, pred), threshold);
}

std::optional<double> average_precision(const LabelMap& gt, const BinarizedPrediction& pred, double threshold) {
  const BinarizedPrediction kept = non_empty(pred);
  const Overlaps o = overlaps(gt, kept.masks);
  const std::size_t k = o.gt_ids.size();
  if (k == 0) return std::nullopt;

  std::vector<std::size_t> order(kept.masks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return kept.confidence[a] > kept.confidence[b]; });

  std::vector<char> claimed(k, 0);
  std::vector<double> precision, recall;
  std::size_t tp = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const std::size_t p = order[rank];
    std::size_t hit = k;
    double best = threshold;
    for (std::size_t g = 0; g < k; ++g) {
      const double iou = o.iou(p, g);
      if (!claimed[g] && iou > best) {
        best = iou;
        hit = g;
      }
    }
    if (hit < k) {
      claimed[hit] = 1;
      ++tp;
    }
    precision.push_back(static_cast<double>(tp) / static_cast<double>(rank + 1));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(k));
  }
  for (std::size_t i = precision.size(); i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double ap = 0.0, previous = 0.0;
  for (std::size_t i = 0; i < recall.size(); ++i) {
    ap += (recall[i] - previous) * precision[i];
    previous = recall[i];
  }
  return ap;
}

std::optional<double> panoptic_quality(const LabelMap& gt, const BinarizedPrediction& pred, double threshold) {
  const LabelMap partition = resolve_overlaps(pred, gt.width(), gt.height());
  const std::vector<BinaryMask> masks = masks_of_partition(partition, pred.masks.size());
  const Overlaps o = overlaps(gt, masks);
  const MatchResult m = greedy_match(o, threshold);
  const double denom =
      static_cast<double>(m.pairs.size()) + 0.5 * (m.unmatched_gt.size() + m.unmatched_pred.size());
  if (denom == 0.0) return std::nullopt;
  double sum = 0.0;
  for (const MatchPair& p : m.pairs) sum += p.iou;
  return sum / denom;
}

PrecisionRecall precision_recall(const LabelMap& gt, const BinarizedPrediction& pred, double threshold) {
  const BinarizedPrediction kept = non_empty(pred);
  const Overlaps o = overlaps(gt, kept.masks);
  const double tp = static_cast<double>(greedy_match(o, threshold).pairs.size());
  PrecisionRecall out;
  if (!kept.masks.empty()) out.precision = tp / static_cast<double>(kept.masks.size());
  if (!o.gt_ids.empty()) out.recall = tp / static_cast<double>(o.gt_ids.size());
  return out;
}

std::optional<double> bg_recall(const LabelMap& gt, const BinaryMask& pred_background, double threshold) {
  check_dims(gt, pred_background.width(), pred_background.height());
  std::size_t inter = 0, uni = 0, truth = 0;
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    const bool a = gt[i] == 0, b = pred_background[i];
    truth += a;
    inter += a && b;
    uni += a || b;
  }
  if (truth == 0) return std::nullopt;
  return static_cast<double>(inter) / static_cast<double>(uni) > threshold ? 1.0 : 0.0;
}

std::optional<double> adjusted_rand(const LabelMap& gt, const LabelMap& pred, bool foreground_only) {
  const PairCounts c = pair_counts(gt, pred, foreground_only);
  if (c.n == 0) return std::nullopt;
  // ARI = (I - SP/T) / ((S + P)/2 - SP/T), scaled by 2T to stay integral.
  const Wide num = 2 * (c.same_both * c.total - c.same_gt * c.same_pred);
  const Wide den = (c.same_gt + c.same_pred) * c.total - 2 * c.same_gt * c.same_pred;
  if (den == 0) return 1.0;
  return ratio(num, den);
}

RandPrecisionRecall rand_precision_recall(const LabelMap& gt, const LabelMap& pred) {
  const PairCounts c = pair_counts(gt, pred, false);
  RandPrecisionRecall out;
  if (c.total == 0) return out;
  const Wide num = c.same_both * c.total - c.same_gt * c.same_pred;
  const Wide den_p = c.same_pred * c.total - c.same_gt * c.same_pred;
  const Wide den_r = c.same_gt * c.total - c.same_gt * c.same_pred;
  if (den_p != 0) out.arp = ratio(num, den_p);
  if (den_r != 0) out.arr = ratio(num, den_r);
  return out;
}

std::optional<double> mean_best_overlap(const LabelMap& gt, const std::vector<BinaryMask>& pred) {
  const Overlaps o = overlaps(gt, pred);
  if (o.gt_ids.empty()) return std::nullopt;
  double sum = 0.0;
  for (std::size_t g = 0; g < o.gt_ids.size(); ++g) {
    double best = 0.0;
    for (std::size_t p = 0; p < pred.size(); ++p) best = std::max(best, o.iou(p, g));
    sum += best;
  }
  return sum / static_cast<double>(o.gt_ids.size());
}

MetricSelection parse_metric_selection(const std::string& list) {
  MetricSelection s;
  std::stringstream ss(list);
  std::string token;
  bool any = false;
  while (std::getline(ss, token, ',')) {
    any = true;
    if (token == "all") {
      s = {true, true, true, true, true, true, true, true};
    } else if (token == "ap") {
      s.ap = true;
    } else if (token == "pq") {
      s.pq = true;
    } else if (token == "pr") {
      s.pr = true;
    } else if (token == "ari") {
      s.ari = true;
    } else if (token == "fgari") {
      s.fgari = true;
    } else if (token == "arp-arr") {
      s.arp_arr = true;
    } else if (token == "mbo") {
      s.mbo = true;
    } else if (token == "bg-recall") {
      s.bg_recall = true;
    } else {
      fail(ErrorCode::kInvalidArgument, "unknown metric '" + token + "'");
    }
  }
  if (!any) fail(ErrorCode::kInvalidArgument, "empty metric list");
  return s;
}

std::vector<std::string> selected_metric_names(const MetricSelection& s) {
  std::vector<std::string> out;
  if (s.ap) out.push_back("ap");
  if (s.pq) out.push_back("pq");
  if (s.pr) {
    out.push_back("precision");
    out.push_back("recall");
  }
  if (s.bg_recall) out.push_back("bg_recall");
  if (s.ari) out.push_back("ari");
  if (s.fgari) out.push_back("fg_ari");
  if (s.arp_arr) {
    out.push_back("arp");
    out.push_back("arr");
  }
  if (s.mbo) out.push_back("mbo");
  return out;
}

SceneMetrics evaluate_scene(const std::string& id, const LabelMap& gt, const SegmentationPrediction& pred,
                            const MetricSelection& s, double threshold) {
  check_dims(gt, pred.width, pred.height);
  const BinarizedPrediction bin = binarize(pred);
  SceneMetrics out;
  out.id = id;
  const auto clamp01 = [](std::optional<double> v) -> std::optional<double> {
    if (v) return std::clamp(*v, 0.0, 1.0);
    return v;
  };

  LabelMap partition;
  if (s.ari || s.fgari || s.arp_arr) partition = resolve_overlaps(bin, gt.width(), gt.height());

  if (s.ap) out.values.emplace_back("ap", average_precision(gt, bin, threshold));
  if (s.pq) out.values.emplace_back("pq", panoptic_quality(gt, bin, threshold));
  if (s.pr) {
    const PrecisionRecall pr = precision_recall(gt, bin, threshold);
    out.values.emplace_back("precision", pr.precision);
    out.values.emplace_back("recall", pr.recall);
  }
  if (s.bg_recall) {
    BinaryMask background;
    if (pred.background) {
      background = *pred.background;
    } else {
      background = BinaryMask(gt.width(), gt.height(), true);
      for (const BinaryMask& m : bin.masks) background = mask_difference(background, m);
    }
    out.values.emplace_back("bg_recall", bg_recall(gt, background, threshold));
  }
  if (s.ari) out.values.emplace_back("ari", clamp01(adjusted_rand(gt, partition, false)));
  if (s.fgari) out.values.emplace_back("fg_ari", clamp01(adjusted_rand(gt, partition, true)));
  if (s.arp_arr) {
    const RandPrecisionRecall r = rand_precision_recall(gt, partition);
    out.values.emplace_back("arp", clamp01(r.arp));
    out.values.emplace_back("arr", clamp01(r.arr));
  }
  if (s.mbo) out.values.emplace_back("mbo", mean_best_overlap(gt, bin.masks));
  return out;
}

SegmentationPrediction load_prediction(const fs::path& dir, const std::string& id, int width, int height) {
  SegmentationPrediction pred;
  pred.width = width;
  pred.height = height;
  const fs::path scene_dir = dir / id;
  std::error_code ec;
  if (!fs::is_directory(scene_dir, ec)) return pred;

  std::vector<std::pair<unsigned long, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(scene_dir, ec)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    const std::string stem = entry.path().stem().string();
    if (stem == "bg") {
      const GrayImage8 g = read_gray8_png(entry.path());
      if (g.width != width || g.height != height) {
        fail(ErrorCode::kDimensionMismatch, "background prediction size differs for scene " + id);
      }
      BinaryMask m(width, height);
      for (std::size_t i = 0; i < g.values.size(); ++i) m.set(i, g.values[i] >= 128);
      pred.background = std::move(m);
      continue;
    }
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    files.emplace_back(std::stoul(stem), entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& [k, path] : files) {
    const GrayImage8 g = read_gray8_png(path);
    if (g.width != width || g.height != height) {
      fail(ErrorCode::kDimensionMismatch, "prediction " + path.string() + " size differs from ground truth");
    }
    std::vector<float> soft(g.values.size());
    for (std::size_t i = 0; i < soft.size(); ++i) soft[i] = static_cast<float>(g.values[i]) / 255.0f;
    pred.soft.push_back(std::move(soft));
  }
  return pred;
}

nlohmann::json evaluate_dataset(const DatasetManifest& dataset, const fs::path& pred_dir,
                                const EvaluateConfig& config) {
  if (dataset.ids.empty()) fail(ErrorCode::kNoScenes, "dataset has no scenes");
  struct Row {
    SceneMetrics metrics;
    std::size_t gt_count = 0, pred_count = 0;
  };
  const std::vector<Row> rows = parallel_map<Row>(dataset.ids.size(), config.jobs, [&](std::size_t i) {
    const std::string& id = dataset.ids[i];
    const LabelMap gt = read_label_png(mask_path(dataset.root, id));
    const SegmentationPrediction pred = load_prediction(pred_dir, id, gt.width(), gt.height());
    Row r;
    r.metrics = evaluate_scene(id, gt, pred, config.selection, config.iou_threshold);
    r.gt_count = object_inventory(gt).size();
    r.pred_count = pred.soft.size();
    return r;
  });

  const std::vector<std::string> names = selected_metric_names(config.selection);
  nlohmann::json scenes = nlohmann::json::array();
  std::map<std::string, std::vector<double>> samples;
  for (const Row& r : rows) {
    nlohmann::json rec = {{"id", r.metrics.id}, {"gt_objects", r.gt_count}, {"pred_masks", r.pred_count}};
    for (const auto& [name, value] : r.metrics.values) {
      if (value) {
        rec[name] = *value;
        samples[name].push_back(*value);
      } else {
        rec[name] = nullptr;
      }
    }
    scenes.push_back(std::move(rec));
  }

  nlohmann::json mean = nlohmann::json::object(), stdev = nlohmann::json::object(),
                 count = nlohmann::json::object(), missing = nlohmann::json::object();
  for (const std::string& name : names) {
    const std::vector<double>& v = samples[name];
    count[name] = v.size();
    missing[name] = rows.size() - v.size();
    if (v.empty()) {
      mean[name] = nullptr;
      stdev[name] = nullptr;
      continue;
    }
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    mean[name] = m;
    stdev[name] = std::sqrt(var / static_cast<double>(v.size()));
  }

  return {
      {"version", kMetricsReportVersion},
      {"dataset", dataset_name(dataset.root)},
      {"metrics", names},
      {"iou_threshold", config.iou_threshold},
      {"binarize_threshold", kBinarizeThreshold},
      {"confidence", "mean-soft-over-support"},
      {"arp_arr_variant", "pair-hypergeometric"},
      {"scenes", scenes},
      {"corpus", {{"mean", mean}, {"std", stdev}, {"count", count}, {"missing", missing}}},
  };
}

}  // namespace segcx
