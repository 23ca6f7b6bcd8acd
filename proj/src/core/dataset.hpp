#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/image.hpp"
#include "core/maskgeo.hpp"

namespace segcx {

struct ObjectInfo {
  std::uint16_t id = 0;
  std::size_t pixel_count = 0;
  BoundingBox box;
};

struct SceneRecord {
  std::string id;
  RgbImage image;
  LabelMap masks;
  std::vector<ObjectInfo> objects;  // ascending label id

  std::size_t object_count() const { return objects.size(); }
};

// Inventory of non-zero labels, ascending by id.
std::vector<ObjectInfo> object_inventory(const LabelMap& labels);

// Validates dimensions and rebuilds the inventory from the label map.
SceneRecord make_scene(std::string id, RgbImage image, LabelMap masks);

enum class Split { kTrain, kTest };

const char* split_name(Split split);
Split parse_split(const std::string& name);

inline constexpr int kManifestVersion = 1;

struct DatasetManifest {
  std::filesystem::path root;
  Split split = Split::kTrain;
  std::vector<std::string> ids;  // sorted
  nlohmann::json provenance = nlohmann::json::object();
};

std::filesystem::path image_path(const std::filesystem::path& root, const std::string& id);
std::filesystem::path mask_path(const std::filesystem::path& root, const std::string& id);

// Last path component of the dataset root, ignoring trailing separators.
std::string dataset_name(const std::filesystem::path& root);

DatasetManifest read_manifest(const std::filesystem::path& root);
void write_manifest(const DatasetManifest& manifest);

/// Loads and validates one scene. Throws MissingFile, DimensionMismatch or
/// CorruptPng; an id absent from the manifest is MissingFile.
SceneRecord load_scene(const DatasetManifest& manifest, const std::string& id);

/// Writes images, masks and manifest.json under `root`. Throws DuplicateId
/// before touching the filesystem when two scenes share an id.
DatasetManifest write_dataset(const std::vector<SceneRecord>& scenes, const std::filesystem::path& root,
                              Split split, nlohmann::json provenance);

// Writes one scene's image and mask; used by writers that stream scenes.
void write_scene_files(const SceneRecord& scene, const std::filesystem::path& root);

struct PrepareConfig {
  // <= 0 selects the largest centered square.
  int crop_size = 0;
  int target_size = 128;
  int min_objects = 2;
  int max_objects = 6;
  bool area_filter = false;
  double min_area_fraction = 0.007;
  double max_area_fraction = 0.2;
  bool blank_background = false;

  void validate() const;  // throws InvalidConfig
};

/// Center-crop, resize (bilinear RGB, nearest labels), per-object area filter
/// and object-count filter. Returns nullopt when the scene is rejected.
std::optional<SceneRecord> prepare_scene(const std::string& id, const RgbImage& image, const LabelMap& masks,
                                         const PrepareConfig& config);

struct PrepareOutcome {
  std::size_t scanned = 0;
  std::size_t kept = 0;
  std::vector<DatasetManifest> outputs;  // one per written split
};

// Hash split: an id goes to the test split when fnv1a64(id) mod 10^6 falls
// below test_fraction * 10^6.
Split hash_split(const std::string& id, double test_fraction);

/// Prepares every scene of a raw corpus laid out as images/<id>.png and
/// masks/<id>.png (ids from manifest.json when present, else from the image
/// file names). Without a test fraction all kept scenes go to `out` under
/// `split`; with one, to out/train and out/test. Throws NoScenes when every
/// scene is rejected.
PrepareOutcome prepare_dataset(const std::filesystem::path& raw, const std::filesystem::path& out,
                               const PrepareConfig& config, std::optional<double> test_fraction, Split split,
                               int jobs);

}  // namespace segcx
