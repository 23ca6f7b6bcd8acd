#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/png_io.hpp"
#include "core/rng.hpp"

namespace segcx {

namespace fs = std::filesystem;

std::vector<ObjectInfo> object_inventory(const LabelMap& labels) {
  std::map<std::uint16_t, ObjectInfo> by_id;
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      const std::uint16_t id = labels.at(x, y);
      if (id == 0) continue;
      auto [it, inserted] = by_id.try_emplace(id);
      ObjectInfo& info = it->second;
      if (inserted) {
        info.id = id;
        info.box = {x, y, x, y};
      }
      ++info.pixel_count;
      info.box.min_x = std::min(info.box.min_x, x);
      info.box.min_y = std::min(info.box.min_y, y);
      info.box.max_x = std::max(info.box.max_x, x);
      info.box.max_y = std::max(info.box.max_y, y);
    }
  }
  std::vector<ObjectInfo> out;
  out.reserve(by_id.size());
  for (auto& [id, info] : by_id) out.push_back(info);
  return out;
}

SceneRecord make_scene(std::string id, RgbImage image, LabelMap masks) {
  if (image.width() != masks.width() || image.height() != masks.height()) {
    fail(ErrorCode::kDimensionMismatch,
         "scene " + id + ": image " + std::to_string(image.width()) + "x" + std::to_string(image.height()) +
             " vs mask " + std::to_string(masks.width()) + "x" + std::to_string(masks.height()));
  }
  SceneRecord scene;
  scene.id = std::move(id);
  scene.objects = object_inventory(masks);
  scene.image = std::move(image);
  scene.masks = std::move(masks);
  return scene;
}

const char* split_name(Split split) { return split == Split::kTrain ? "train" : "test"; }

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  fail(ErrorCode::kInvalidArgument, "unknown split '" + name + "'");
}

namespace {

void check_id(const std::string& id) {
  if (id.empty() || id.find('/') != std::string::npos || id == "." || id == "..") {
    fail(ErrorCode::kIoFailure, "invalid scene id '" + id + "'");
  }
}

}  // namespace

fs::path image_path(const fs::path& root, const std::string& id) { return root / "images" / (id + ".png"); }

fs::path mask_path(const fs::path& root, const std::string& id) { return root / "masks" / (id + ".png"); }

std::string dataset_name(const fs::path& root) {
  fs::path p = root.lexically_normal();
  if (p.filename().empty()) p = p.parent_path();
  return p.filename().generic_string();
}

DatasetManifest read_manifest(const fs::path& root) {
  const fs::path path = root / "manifest.json";
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kMissingFile, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIoFailure, path.string() + ": " + e.what());
  }
  DatasetManifest manifest;
  manifest.root = root;
  try {
    manifest.split = parse_split(doc.value("split", std::string("train")));
    manifest.ids = doc.at("ids").get<std::vector<std::string>>();
    if (doc.contains("provenance")) manifest.provenance = doc.at("provenance");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIoFailure, path.string() + ": " + e.what());
  }
  for (const std::string& id : manifest.ids) check_id(id);
  std::sort(manifest.ids.begin(), manifest.ids.end());
  return manifest;
}

void write_manifest(const DatasetManifest& manifest) {
  nlohmann::json doc;
  doc["version"] = kManifestVersion;
  doc["split"] = split_name(manifest.split);
  doc["ids"] = manifest.ids;
  doc["provenance"] = manifest.provenance;
  const fs::path path = manifest.root / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) fail(ErrorCode::kIoFailure, "write failed: " + path.string());
}

SceneRecord load_scene(const DatasetManifest& manifest, const std::string& id) {
  if (!std::binary_search(manifest.ids.begin(), manifest.ids.end(), id)) {
    fail(ErrorCode::kMissingFile, "scene '" + id + "' is not listed in the manifest");
  }
  RgbImage image = read_rgb_png(image_path(manifest.root, id));
  LabelMap masks = read_label_png(mask_path(manifest.root, id));
  return make_scene(id, std::move(image), std::move(masks));
}

void write_scene_files(const SceneRecord& scene, const fs::path& root) {
  check_id(scene.id);
  write_rgb_png(image_path(root, scene.id), scene.image);
  write_label_png(mask_path(root, scene.id), scene.masks);
}

DatasetManifest write_dataset(const std::vector<SceneRecord>& scenes, const fs::path& root, Split split,
                              nlohmann::json provenance) {
  std::set<std::string> seen;
  for (const SceneRecord& s : scenes) {
    check_id(s.id);
    if (!seen.insert(s.id).second) fail(ErrorCode::kDuplicateId, "duplicate scene id '" + s.id + "'");
  }
  std::error_code ec;
  fs::create_directories(root / "images", ec);
  fs::create_directories(root / "masks", ec);
  if (ec) fail(ErrorCode::kIoFailure, "cannot create " + root.string() + ": " + ec.message());

  for (const SceneRecord& s : scenes) write_scene_files(s, root);

  DatasetManifest manifest;
  manifest.root = root;
  manifest.split = split;
  manifest.ids.assign(seen.begin(), seen.end());
  manifest.provenance = std::move(provenance);
  write_manifest(manifest);
  return manifest;
}

void PrepareConfig::validate() const {
  if (target_size <= 0) fail(ErrorCode::kInvalidConfig, "target size must be positive");
  if (min_objects < 0 || max_objects < min_objects) {
    fail(ErrorCode::kInvalidConfig, "object-count bounds must satisfy 0 <= min <= max");
  }
  if (area_filter && (min_area_fraction < 0.0 || max_area_fraction <= 0.0 || min_area_fraction > max_area_fraction)) {
    fail(ErrorCode::kInvalidConfig, "area-fraction bounds must satisfy 0 <= min <= max, max > 0");
  }
}

std::optional<SceneRecord> prepare_scene(const std::string& id, const RgbImage& image, const LabelMap& masks,
                                         const PrepareConfig& config) {
  config.validate();
  if (image.width() != masks.width() || image.height() != masks.height()) {
    fail(ErrorCode::kDimensionMismatch, "prepare_scene: image and mask sizes differ for " + id);
  }
  const int side = config.crop_size > 0 ? config.crop_size : std::min(image.width(), image.height());
  if (side > image.width() || side > image.height()) {
    fail(ErrorCode::kInvalidConfig, "crop size " + std::to_string(side) + " exceeds image " + id);
  }
  // Floor offsets: on odd margins the right/bottom side loses the extra pixel.
  const int x0 = (image.width() - side) / 2;
  const int y0 = (image.height() - side) / 2;
  RgbImage out_image = resize_bilinear(crop(image, x0, y0, side, side), config.target_size, config.target_size);
  LabelMap out_masks = resize_nearest(crop(masks, x0, y0, side, side), config.target_size, config.target_size);

  if (config.area_filter) {
    const double area = static_cast<double>(config.target_size) * config.target_size;
    const double lo = config.min_area_fraction * area;
    const double hi = config.max_area_fraction * area;
    std::set<std::uint16_t> dropped;
    for (const ObjectInfo& obj : object_inventory(out_masks)) {
      const auto count = static_cast<double>(obj.pixel_count);
      if (count < lo || count > hi) dropped.insert(obj.id);
    }
    if (!dropped.empty()) {
      for (std::uint16_t& l : out_masks.labels()) {
        if (dropped.count(l) != 0) l = 0;
      }
    }
  }

  SceneRecord scene = make_scene(id, std::move(out_image), std::move(out_masks));
  const auto k = static_cast<int>(scene.object_count());
  if (k < config.min_objects || k > config.max_objects) return std::nullopt;

  if (config.blank_background) {
    for (std::size_t i = 0; i < scene.masks.pixel_count(); ++i) {
      if (scene.masks[i] == 0) scene.image.set(i, Rgb{0, 0, 0});
    }
  }
  return scene;
}

Split hash_split(const std::string& id, double test_fraction) {
  constexpr std::uint64_t kScale = 1000000;
  const auto cut = static_cast<std::uint64_t>(std::llround(test_fraction * kScale));
  return fnv1a64(id) % kScale < cut ? Split::kTest : Split::kTrain;
}

PrepareOutcome prepare_dataset(const fs::path& raw, const fs::path& out, const PrepareConfig& config,
                               std::optional<double> test_fraction, Split split, int jobs) {
  config.validate();
  if (test_fraction && (*test_fraction < 0.0 || *test_fraction > 1.0)) {
    fail(ErrorCode::kInvalidConfig, "test fraction must lie in [0, 1]");
  }
  std::vector<std::string> ids;
  std::error_code ec;
  if (fs::exists(raw / "manifest.json", ec)) {
    ids = read_manifest(raw).ids;
  } else {
    if (!fs::is_directory(raw / "images", ec)) fail(ErrorCode::kMissingFile, "no images/ directory in " + raw.string());
    for (const auto& entry : fs::directory_iterator(raw / "images", ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".png") ids.push_back(entry.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
  }
  for (const std::string& id : ids) check_id(id);

  const auto target_of = [&](const std::string& id) {
    const Split s = test_fraction ? hash_split(id, *test_fraction) : split;
    return std::pair<Split, fs::path>{s, test_fraction ? out / split_name(s) : out};
  };
  const std::set<fs::path> roots =
      test_fraction ? std::set<fs::path>{out / "train", out / "test"} : std::set<fs::path>{out};
  for (const fs::path& r : roots) {
    fs::create_directories(r / "images", ec);
    fs::create_directories(r / "masks", ec);
    if (ec) fail(ErrorCode::kIoFailure, "cannot create " + r.string() + ": " + ec.message());
  }

  const std::vector<char> kept = parallel_map<char>(ids.size(), jobs, [&](std::size_t i) -> char {
    const std::string& id = ids[i];
    const std::optional<SceneRecord> scene =
        prepare_scene(id, read_rgb_png(image_path(raw, id)), read_label_png(mask_path(raw, id)), config);
    if (!scene) return 0;
    write_scene_files(*scene, target_of(id).second);
    return 1;
  });

  PrepareOutcome outcome;
  outcome.scanned = ids.size();
  std::map<fs::path, DatasetManifest> manifests;
  for (const fs::path& r : roots) {
    DatasetManifest& m = manifests[r];
    m.root = r;
    m.split = test_fraction ? parse_split(r.filename().string()) : split;
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!kept[i]) continue;
    ++outcome.kept;
    manifests[target_of(ids[i]).second].ids.push_back(ids[i]);
  }
  if (outcome.kept == 0) {
    fail(ErrorCode::kNoScenes, "all " + std::to_string(ids.size()) + " scenes were filtered out");
  }
  const nlohmann::json settings = {
      {"crop_size", config.crop_size},
      {"target_size", config.target_size},
      {"min_objects", config.min_objects},
      {"max_objects", config.max_objects},
      {"area_filter", config.area_filter},
      {"min_area_fraction", config.min_area_fraction},
      {"max_area_fraction", config.max_area_fraction},
      {"blank_background", config.blank_background},
      {"test_fraction", test_fraction ? nlohmann::json(*test_fraction) : nlohmann::json(nullptr)},
  };
  for (auto& [r, m] : manifests) {
    m.provenance = {{"source", raw.generic_string()},
                    {"prepare", settings},
                    {"scanned", outcome.scanned},
                    {"kept", outcome.kept}};
    write_manifest(m);
    outcome.outputs.push_back(m);
  }
  return outcome;
}

}  // namespace segcx
