#include "core/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "core/error.hpp"
#include "core/factors_background.hpp"
#include "core/factors_object.hpp"
#include "core/factors_scene.hpp"
#include "core/parallel.hpp"

namespace segcx {

namespace {

enum FactorIndex : std::size_t {
  kObjectColorGradient,
  kObjectShapeConcavity,
  kColorSimilarity,
  kShapeVariation,
  kBgColorGradient,
  kBgFgColorSimilarity,
  kBgShapeIrregularity,
  kColorCount,
  kColorEntropy,
  kNonRectangularity,
  kIncompactness,
  kDiscontinuity,
  kDecentralization,
  kChamferColorSimilarity,
  kHausdorffColorSimilarity,
  kBoundaryShapeSimilarity,
  kShapeEntropy,
  kCentroidProximity,
  kChamferProximity,
  kAreaVariation,
};

std::string reason(const Error& e) { return std::string(error_code_name(e.code())) + ": " + e.what(); }

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

struct SceneResult {
  nlohmann::json record;
  std::vector<Sample> samples;
};

class SceneAnalyzer {
 public:
  SceneAnalyzer(const std::string& id, const AnalyzeConfig& config) : id_(id), config_(config) {
    record_ = {{"id", id}};
  }

  SceneResult run(const DatasetManifest& dataset) {
    SceneRecord scene;
    try {
      scene = load_scene(dataset, id_);
    } catch (const Error& e) {
      record_["error"] = reason(e);
      const auto& table = factor_table();
      for (std::size_t f = 0; f < table.size(); ++f) {
        if (config_.factors.includes(table[f])) samples_.push_back({id_, std::nullopt, f, std::nullopt});
      }
      return finish();
    }
    record_["object_count"] = scene.object_count();
    if (config_.factors.object || config_.factors.candidates) objects(scene);
    if (config_.factors.scene || config_.factors.candidates) scene_level(scene);
    if (config_.factors.background) background(scene);
    return finish();
  }

 private:
  SceneResult finish() {
    if (!missing_.empty()) record_["missing"] = missing_;
    return {std::move(record_), std::move(samples_)};
  }

  // Evaluates fn, recording the value (or the failure) for factor f.
  void measure(nlohmann::json& target, std::size_t f, std::optional<std::uint16_t> object,
               const std::function<double()>& fn) {
    std::optional<double> value;
    try {
      value = fn();
    } catch (const Error& e) {
      nlohmann::json m = {{"factor", factor_table()[f].name}, {"reason", reason(e)}};
      if (object) m["object"] = *object;
      missing_.push_back(std::move(m));
    }
    target[factor_table()[f].name] = optional_json(value);
    samples_.push_back({id_, object, f, value});
  }

  void objects(const SceneRecord& scene) {
    const std::vector<std::uint8_t> gray = to_grayscale(scene.image);
    nlohmann::json list = nlohmann::json::array();
    for (const ObjectInfo& obj : scene.objects) {
      const BinaryMask mask = mask_of_label(scene.masks, obj.id);
      nlohmann::json rec = {{"id", obj.id}, {"pixels", obj.pixel_count}};
      if (config_.factors.object) {
        measure(rec, kObjectColorGradient, obj.id, [&] { return masked_color_gradient(gray, mask); });
        measure(rec, kObjectShapeConcavity, obj.id, [&] { return object_shape_concavity(mask); });
      }
      if (config_.factors.candidates) {
        std::optional<ObjectCandidates> c;
        std::optional<Error> failure;
        try {
          c = object_candidate_factors(scene.image, mask);
        } catch (const Error& e) {
          failure = e;
        }
        const auto take = [&](std::size_t f, auto field) {
          measure(rec, f, obj.id, [&]() -> double {
            if (!c) throw *failure;
            return field(*c);
          });
        };
        take(kColorCount, [](const ObjectCandidates& v) { return static_cast<double>(v.color_count); });
        take(kColorEntropy, [](const ObjectCandidates& v) { return v.color_entropy; });
        take(kNonRectangularity, [](const ObjectCandidates& v) { return v.non_rectangularity; });
        take(kIncompactness, [](const ObjectCandidates& v) { return v.incompactness; });
        take(kDiscontinuity, [](const ObjectCandidates& v) { return v.discontinuity; });
        take(kDecentralization, [](const ObjectCandidates& v) { return v.decentralization; });
      }
      list.push_back(std::move(rec));
    }
    record_["objects"] = std::move(list);
  }

  void scene_level(const SceneRecord& scene) {
    nlohmann::json rec = nlohmann::json::object();
    if (config_.factors.scene) {
      measure(rec, kColorSimilarity, std::nullopt, [&] { return inter_object_color_similarity(scene); });
      measure(rec, kShapeVariation, std::nullopt, [&] { return inter_object_shape_variation(scene); });
    }
    if (config_.factors.candidates) {
      std::optional<SceneCandidates> c;
      std::optional<Error> failure;
      try {
        c = scene_candidate_factors(scene, config_.seed);
      } catch (const Error& e) {
        failure = e;
      }
      const auto take = [&](std::size_t f, double SceneCandidates::*field) {
        measure(rec, f, std::nullopt, [&]() -> double {
          if (!c) throw *failure;
          return (*c).*field;
        });
      };
      take(kChamferColorSimilarity, &SceneCandidates::chamfer_color_similarity);
      take(kHausdorffColorSimilarity, &SceneCandidates::hausdorff_color_similarity);
      take(kBoundaryShapeSimilarity, &SceneCandidates::boundary_shape_similarity);
      take(kShapeEntropy, &SceneCandidates::shape_entropy);
      take(kCentroidProximity, &SceneCandidates::centroid_proximity);
      take(kChamferProximity, &SceneCandidates::chamfer_proximity);
      take(kAreaVariation, &SceneCandidates::area_variation);
    }
    record_["scene"] = std::move(rec);
  }

  void background(const SceneRecord& scene) {
    nlohmann::json rec = nlohmann::json::object();
    measure(rec, kBgColorGradient, std::nullopt, [&] { return bg_color_gradient(scene); });
    measure(rec, kBgFgColorSimilarity, std::nullopt,
            [&] { return bg_fg_color_similarity(scene, config_.hungarian_budget, config_.seed); });
    nlohmann::json regions = nlohmann::json::array();
    measure(rec, kBgShapeIrregularity, std::nullopt, [&] {
      const BackgroundShape shape = bg_shape_irregularity(scene);
      for (const RegionIrregularity& r : shape.regions) {
        regions.push_back({{"area", r.area}, {"inscribed", r.inscribed}, {"score", r.score}});
      }
      return shape.irregularity;
    });
    rec["regions"] = std::move(regions);
    record_["background"] = std::move(rec);
  }

  const std::string& id_;
  const AnalyzeConfig& config_;
  nlohmann::json record_;
  nlohmann::json missing_ = nlohmann::json::array();
  std::vector<Sample> samples_;
};

nlohmann::json summary_json(const Summary& s) {
  return {{"count", s.count},           {"missing", s.missing}, {"mean", optional_json(s.mean)},
          {"median", optional_json(s.median)}, {"p5", optional_json(s.p5)}, {"p95", optional_json(s.p95)}};
}

}  // namespace

const std::vector<FactorSpec>& factor_table() {
  static const std::vector<FactorSpec> table = {
      {"object_color_gradient", "object", FactorLevel::kObject, false, 100.0},
      {"object_shape_concavity", "object", FactorLevel::kObject, true, 1.0},
      {"inter_object_color_similarity", "scene", FactorLevel::kScene, true, 1.0},
      {"inter_object_shape_variation", "scene", FactorLevel::kScene, false, 100.0},
      {"bg_color_gradient", "background", FactorLevel::kScene, false, 100.0},
      {"bg_fg_color_similarity", "background", FactorLevel::kScene, true, 1.0},
      {"bg_shape_irregularity", "background", FactorLevel::kScene, true, 1.0},
      {"color_count", "candidates", FactorLevel::kObject, false, 1000.0},
      {"color_entropy", "candidates", FactorLevel::kObject, false, 8.0},
      {"non_rectangularity", "candidates", FactorLevel::kObject, true, 1.0},
      {"incompactness", "candidates", FactorLevel::kObject, true, 1.0},
      {"discontinuity", "candidates", FactorLevel::kObject, true, 1.0},
      {"decentralization", "candidates", FactorLevel::kObject, false, 1e10},
      {"chamfer_color_similarity", "candidates", FactorLevel::kScene, true, 1.0},
      {"hausdorff_color_similarity", "candidates", FactorLevel::kScene, true, 1.0},
      {"boundary_shape_similarity", "candidates", FactorLevel::kScene, true, 1.0},
      {"shape_entropy", "candidates", FactorLevel::kScene, false, 4.0},
      {"centroid_proximity", "candidates", FactorLevel::kScene, false, 200.0},
      {"chamfer_proximity", "candidates", FactorLevel::kScene, false, 200.0},
      {"area_variation", "candidates", FactorLevel::kScene, false, 16384.0},
  };
  return table;
}

bool FactorSelection::includes(const FactorSpec& spec) const {
  const std::string group = spec.group;
  return (group == "object" && object) || (group == "scene" && scene) || (group == "background" && background) ||
         (group == "candidates" && candidates);
}

FactorSelection parse_factor_selection(const std::string& list) {
  FactorSelection s;
  std::stringstream ss(list);
  std::string token;
  bool any = false;
  while (std::getline(ss, token, ',')) {
    any = true;
    if (token == "all") {
      s = {true, true, true, true};
    } else if (token == "object") {
      s.object = true;
    } else if (token == "scene") {
      s.scene = true;
    } else if (token == "background") {
      s.background = true;
    } else if (token == "candidates") {
      s.candidates = true;
    } else {
      fail(ErrorCode::kInvalidArgument, "unknown factor group '" + token + "'");
    }
  }
  if (!any) fail(ErrorCode::kInvalidArgument, "empty factor list");
  return s;
}

void AnalyzeConfig::validate() const {
  if (jobs < 1) fail(ErrorCode::kInvalidConfig, "jobs must be at least 1");
  if (bins < 2) fail(ErrorCode::kInvalidConfig, "bins must be at least 2");
  if (!(factors.object || factors.scene || factors.background || factors.candidates)) {
    fail(ErrorCode::kInvalidConfig, "no factor group selected");
  }
}

Histogram make_histogram(const std::vector<double>& values, double upper, int bins, bool with_overflow) {
  Histogram h;
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = upper * i / bins;
  h.counts.assign(bins, 0);
  for (double v : values) {
    if (with_overflow && v >= upper) {
      ++h.overflow;
      continue;
    }
    const double t = std::clamp(v / upper, 0.0, 1.0);
    const int bin = std::min(static_cast<int>(t * bins), bins - 1);
    ++h.counts[bin];
  }
  return h;
}

Summary summarize(std::vector<double> values, std::size_t missing) {
  Summary s;
  s.count = values.size();
  s.missing = missing;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  s.median = quantile(0.5);
  s.p5 = quantile(0.05);
  s.p95 = quantile(0.95);
  return s;
}

FactorAnalysis analyze_dataset(const DatasetManifest& dataset, const AnalyzeConfig& config) {
  config.validate();
  if (dataset.ids.empty()) fail(ErrorCode::kNoScenes, "dataset has no scenes");

  std::vector<SceneResult> results = parallel_map<SceneResult>(
      dataset.ids.size(), config.jobs,
      [&](std::size_t i) { return SceneAnalyzer(dataset.ids[i], config).run(dataset); });

  const auto& table = factor_table();
  FactorAnalysis out;
  nlohmann::json scenes = nlohmann::json::array();
  std::vector<std::vector<double>> values(table.size());
  std::vector<std::size_t> missing(table.size(), 0);
  for (SceneResult& r : results) {
    for (Sample& s : r.samples) {
      if (s.value) {
        values[s.factor].push_back(*s.value);
      } else {
        ++missing[s.factor];
      }
      out.samples.push_back(std::move(s));
    }
    scenes.push_back(std::move(r.record));
  }

  nlohmann::json factors = nlohmann::json::object();
  nlohmann::json selected = nlohmann::json::array();
  for (std::size_t f = 0; f < table.size(); ++f) {
    const FactorSpec& spec = table[f];
    if (!config.factors.includes(spec)) continue;
    selected.push_back(spec.name);
    const Histogram h = make_histogram(values[f], spec.upper, config.bins, !spec.bounded);
    nlohmann::json hist = {{"edges", h.edges}, {"counts", h.counts}};
    if (!spec.bounded) hist["overflow"] = h.overflow;
    factors[spec.name] = {
        {"group", spec.group},
        {"level", spec.level == FactorLevel::kObject ? "object" : "scene"},
        {"bounded", spec.bounded},
        {"summary", summary_json(summarize(values[f], missing[f]))},
        {"histogram", std::move(hist)},
    };
  }

  out.report = {
      {"version", kReportVersion},
      {"dataset", dataset_name(dataset.root)},
      {"scene_count", dataset.ids.size()},
      {"config",
       {{"factors", selected},
        {"bins", config.bins},
        {"hungarian_budget", config.hungarian_budget},
        {"seed", config.seed}}},
      {"factors", std::move(factors)},
      {"scenes", std::move(scenes)},
  };
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string samples_to_csv(const std::vector<Sample>& samples) {
  std::string out = "scene_id,object_id,factor,value\n";
  for (const Sample& s : samples) {
    out += s.scene_id;
    out += ',';
    if (s.object_id) out += std::to_string(*s.object_id);
    out += ',';
    out += factor_table()[s.factor].name;
    out += ',';
    out += s.value ? format_double(*s.value) : "NA";
    out += '\n';
  }
  return out;
}

}  // namespace segcx
