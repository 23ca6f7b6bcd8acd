#include "segcx/segcx.h"

#include <fstream>
#include <new>
#include <string>

#include "core/ablation.hpp"
#include "core/analysis.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/factors_background.hpp"
#include "core/factors_object.hpp"
#include "core/factors_scene.hpp"
#include "core/metrics.hpp"
#include "core/synth.hpp"

struct segcx_dataset {
  segcx::DatasetManifest manifest;
};

struct segcx_scene {
  segcx::SceneRecord record;
};

namespace {

thread_local std::string last_error;

static_assert(static_cast<int>(segcx::ErrorCode::kNoScenes) + 1 == SEGCX_E_NO_SCENES);

segcx_status to_status(segcx::ErrorCode code) { return static_cast<segcx_status>(static_cast<int>(code) + 1); }

// Runs fn, translating exceptions into status codes and the thread's message.
template <typename Fn>
segcx_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return SEGCX_OK;
  } catch (const segcx::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return SEGCX_E_INTERNAL;
}

void require(const void* p, const char* what) {
  if (p == nullptr) segcx::fail(segcx::ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

segcx::BinaryMask object_mask(const segcx_scene* scene, size_t object) {
  require(scene, "scene");
  if (object >= scene->record.objects.size()) {
    segcx::fail(segcx::ErrorCode::kInvalidArgument, "object index out of range");
  }
  return segcx::mask_of_label(scene->record.masks, scene->record.objects[object].id);
}

void write_text(const char* path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) segcx::fail(segcx::ErrorCode::kIoFailure, std::string("cannot write ") + path);
  out << text;
  if (!out) segcx::fail(segcx::ErrorCode::kIoFailure, std::string("write failed: ") + path);
}

}  // namespace

extern "C" {

const char* segcx_status_name(segcx_status status) {
  if (status == SEGCX_OK) return "Ok";
  if (status == SEGCX_E_INTERNAL) return "Internal";
  if (status < SEGCX_OK || status > SEGCX_E_INTERNAL) return "Unknown";
  return segcx::error_code_name(static_cast<segcx::ErrorCode>(static_cast<int>(status) - 1));
}

int segcx_status_is_usage(segcx_status status) {
  return status == SEGCX_E_USAGE || status == SEGCX_E_INVALID_ARGUMENT || status == SEGCX_E_INVALID_CONFIG ||
         status == SEGCX_E_INVALID_SPEC;
}

const char* segcx_last_error(void) { return last_error.c_str(); }

const char* segcx_version(void) { return "1.0.0"; }

segcx_status segcx_dataset_open(const char* root, segcx_dataset** out) {
  return guarded([&] {
    require(root, "root");
    require(out, "out");
    *out = nullptr;
    auto* d = new segcx_dataset{segcx::read_manifest(root)};
    *out = d;
  });
}

void segcx_dataset_close(segcx_dataset* dataset) { delete dataset; }

size_t segcx_dataset_size(const segcx_dataset* dataset) { return dataset ? dataset->manifest.ids.size() : 0; }

const char* segcx_dataset_scene_id(const segcx_dataset* dataset, size_t index) {
  if (dataset == nullptr || index >= dataset->manifest.ids.size()) return nullptr;
  return dataset->manifest.ids[index].c_str();
}

segcx_status segcx_scene_load(const segcx_dataset* dataset, size_t index, segcx_scene** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "out");
    *out = nullptr;
    if (index >= dataset->manifest.ids.size()) {
      segcx::fail(segcx::ErrorCode::kInvalidArgument, "scene index out of range");
    }
    *out = new segcx_scene{segcx::load_scene(dataset->manifest, dataset->manifest.ids[index])};
  });
}

void segcx_scene_free(segcx_scene* scene) { delete scene; }

void segcx_scene_size(const segcx_scene* scene, int* width, int* height) {
  if (width) *width = scene ? scene->record.image.width() : 0;
  if (height) *height = scene ? scene->record.image.height() : 0;
}

size_t segcx_scene_object_count(const segcx_scene* scene) { return scene ? scene->record.object_count() : 0; }

uint16_t segcx_scene_object_id(const segcx_scene* scene, size_t index) {
  if (scene == nullptr || index >= scene->record.objects.size()) return 0;
  return scene->record.objects[index].id;
}

segcx_status segcx_object_color_gradient(const segcx_scene* scene, size_t object, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = segcx::object_color_gradient(scene->record.image, object_mask(scene, object));
  });
}

segcx_status segcx_object_shape_concavity(const segcx_scene* scene, size_t object, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = segcx::object_shape_concavity(object_mask(scene, object));
  });
}

segcx_status segcx_scene_color_similarity(const segcx_scene* scene, double* out) {
  return guarded([&] {
    require(scene, "scene");
    require(out, "out");
    *out = segcx::inter_object_color_similarity(scene->record);
  });
}

segcx_status segcx_scene_shape_variation(const segcx_scene* scene, double* out) {
  return guarded([&] {
    require(scene, "scene");
    require(out, "out");
    *out = segcx::inter_object_shape_variation(scene->record);
  });
}

segcx_status segcx_bg_color_gradient(const segcx_scene* scene, double* out) {
  return guarded([&] {
    require(scene, "scene");
    require(out, "out");
    *out = segcx::bg_color_gradient(scene->record);
  });
}

segcx_status segcx_bg_fg_color_similarity(const segcx_scene* scene, size_t budget, uint64_t seed, double* out) {
  return guarded([&] {
    require(scene, "scene");
    require(out, "out");
    *out = segcx::bg_fg_color_similarity(scene->record, budget, seed);
  });
}

segcx_status segcx_bg_shape_irregularity(const segcx_scene* scene, double* out) {
  return guarded([&] {
    require(scene, "scene");
    require(out, "out");
    *out = segcx::bg_shape_irregularity(scene->record).irregularity;
  });
}

void segcx_prepare_options_init(segcx_prepare_options* o) {
  if (o == nullptr) return;
  const segcx::PrepareConfig d;
  o->crop_size = d.crop_size;
  o->target_size = d.target_size;
  o->min_objects = d.min_objects;
  o->max_objects = d.max_objects;
  o->area_filter = d.area_filter;
  o->min_area_fraction = d.min_area_fraction;
  o->max_area_fraction = d.max_area_fraction;
  o->blank_background = d.blank_background;
  o->test_fraction = -1.0;
  o->split = "train";
  o->jobs = 1;
}

segcx_status segcx_prepare(const char* raw_dir, const char* out_dir, const segcx_prepare_options* o, size_t* kept) {
  return guarded([&] {
    require(raw_dir, "raw_dir");
    require(out_dir, "out_dir");
    require(o, "options");
    segcx::PrepareConfig c;
    c.crop_size = o->crop_size;
    c.target_size = o->target_size;
    c.min_objects = o->min_objects;
    c.max_objects = o->max_objects;
    c.area_filter = o->area_filter != 0;
    c.min_area_fraction = o->min_area_fraction;
    c.max_area_fraction = o->max_area_fraction;
    c.blank_background = o->blank_background != 0;
    std::optional<double> fraction;
    if (o->test_fraction >= 0.0) fraction = o->test_fraction;
    const segcx::Split split = segcx::parse_split(o->split ? o->split : "train");
    const segcx::PrepareOutcome r = segcx::prepare_dataset(raw_dir, out_dir, c, fraction, split, o->jobs);
    if (kept) *kept = r.kept;
  });
}

void segcx_analyze_options_init(segcx_analyze_options* o) {
  if (o == nullptr) return;
  o->factors = "object,scene,background";
  o->bins = segcx::kDefaultBins;
  o->hungarian_budget = segcx::kDefaultPixelBudget;
  o->seed = 0;
  o->jobs = 1;
}

segcx_status segcx_analyze(const segcx_dataset* dataset, const segcx_analyze_options* o, const char* json_path,
                           const char* csv_path) {
  return guarded([&] {
    require(dataset, "dataset");
    require(o, "options");
    require(json_path, "json_path");
    segcx::AnalyzeConfig c;
    c.factors = segcx::parse_factor_selection(o->factors ? o->factors : "");
    c.bins = o->bins;
    c.hungarian_budget = o->hungarian_budget;
    c.seed = o->seed;
    c.jobs = o->jobs;
    const segcx::FactorAnalysis a = segcx::analyze_dataset(dataset->manifest, c);
    write_text(json_path, a.report.dump(2) + "\n");
    if (csv_path) write_text(csv_path, segcx::samples_to_csv(a.samples));
  });
}

void segcx_ablate_options_init(segcx_ablate_options* o) {
  if (o == nullptr) return;
  o->ops = "C";
  o->texture_dir = nullptr;
  o->seed = 0;
  o->jobs = 1;
}

segcx_status segcx_ablate(const segcx_dataset* dataset, const segcx_ablate_options* o, const char* out_dir) {
  return guarded([&] {
    require(dataset, "dataset");
    require(o, "options");
    require(out_dir, "out_dir");
    segcx::AblationSpec spec;
    spec.ops = segcx::parse_ablation_ops(o->ops ? o->ops : "");
    spec.seed = o->seed;
    if (spec.needs_bank()) {
      if (o->texture_dir) {
        spec.bank = segcx::load_texture_bank(o->texture_dir);
        spec.bank_source = std::filesystem::path(o->texture_dir).generic_string();
      } else {
        spec.bank = segcx::builtin_texture_bank();
      }
    }
    segcx::apply_ablations(dataset->manifest, spec, out_dir, o->jobs);
  });
}

void segcx_evaluate_options_init(segcx_evaluate_options* o) {
  if (o == nullptr) return;
  o->metrics = "all";
  o->iou_threshold = segcx::kDefaultIouThreshold;
  o->jobs = 1;
}

segcx_status segcx_evaluate(const segcx_dataset* dataset, const char* pred_dir, const segcx_evaluate_options* o,
                            const char* json_path) {
  return guarded([&] {
    require(dataset, "dataset");
    require(pred_dir, "pred_dir");
    require(o, "options");
    require(json_path, "json_path");
    segcx::EvaluateConfig c;
    c.selection = segcx::parse_metric_selection(o->metrics ? o->metrics : "");
    if (!(o->iou_threshold >= 0.0 && o->iou_threshold < 1.0)) {
      segcx::fail(segcx::ErrorCode::kInvalidConfig, "IoU threshold must lie in [0, 1)");
    }
    if (o->jobs < 1) segcx::fail(segcx::ErrorCode::kInvalidConfig, "jobs must be at least 1");
    c.iou_threshold = o->iou_threshold;
    c.jobs = o->jobs;
    write_text(json_path, segcx::evaluate_dataset(dataset->manifest, pred_dir, c).dump(2) + "\n");
  });
}

segcx_status segcx_generate(const char* kind, size_t count, int width, int height, uint64_t seed, int jobs,
                            const char* out_dir) {
  return guarded([&] {
    require(kind, "kind");
    require(out_dir, "out_dir");
    segcx::generate_dataset(segcx::parse_synth_kind(kind), count, width, height, seed, out_dir, jobs);
  });
}

}  // extern "C"
