#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/texture_bank.hpp"

namespace segcx {

// Declaration order is the order in which a composed spec is applied.
enum class AblationOp { kS, kT, kC, kU, kBgS, kBgC, kBgT };

const char* ablation_op_name(AblationOp op);

/// Parses a comma-separated token list (C,S,T,U,bgC,bgT,bgS) into canonical
/// order. Throws InvalidSpec on empty lists, unknown tokens or duplicates.
std::vector<AblationOp> parse_ablation_ops(const std::string& list);

struct AblationSpec {
  std::vector<AblationOp> ops;  // canonical order, duplicate-free
  std::uint64_t seed = 0;
  TextureBank bank;
  std::string bank_source = "builtin";

  bool needs_bank() const;
  void validate() const;  // throws InvalidSpec or BankMissing
};

// -C: every object takes its mean color (round half up per channel).
SceneRecord ablate_object_color(const SceneRecord& scene);

/// -S: every object grows to its convex hull; hulls are painted in decreasing
/// area order, new pixels copy the color of the nearest original pixel of the
/// same object. Throws ObjectVanished if an object ends up fully covered.
SceneRecord ablate_object_shape(const SceneRecord& scene);

/// -T: each object is filled with a tiled bank texture. The K textures are
/// chosen by max-min mean-color distance starting from the farthest pair; the
/// seed shuffles which object receives which texture and the tile offsets.
/// Throws BankTooSmall.
SceneRecord ablate_scene_texture(const SceneRecord& scene, const TextureBank& bank, std::uint64_t seed);

/// -U: objects are rescaled about their centroids so every bounding-box
/// diagonal matches the mean diagonal length. Labels are resampled nearest,
/// colors bilinear over object pixels only; vacated pixels copy the nearest
/// original background pixel. Objects are painted in decreasing area order and
/// clipped at the frame. Ids of objects that lost more than half of their
/// rescaled pixels are appended to `heavily_clipped` when given. Throws
/// TooFewObjects or ObjectVanished.
SceneRecord ablate_scene_scale(const SceneRecord& scene, std::vector<std::uint16_t>* heavily_clipped = nullptr);

// bgC: the background takes its mean color. Throws EmptyBackground.
SceneRecord ablate_background_color(const SceneRecord& scene);

/// bgT: the background is tiled with the bank texture whose mean color is
/// farthest from the mean foreground color. Throws EmptyBackground or
/// BankMissing.
SceneRecord ablate_background_texture(const SceneRecord& scene, const TextureBank& bank, std::uint64_t seed);

/// bgS: every region enclosed by the background grows into the background up
/// to its convex hull. A grown pixel copies label and color from the nearest
/// original pixel of its region (ties to the smaller label). Throws
/// EmptyBackground.
SceneRecord ablate_background_shape(const SceneRecord& scene);

struct AblationResult {
  SceneRecord scene;
  std::vector<std::string> warnings;
};

// Applies spec.ops in order to one scene; randomness derives from
// (spec.seed, scene id).
AblationResult apply_ablations(const SceneRecord& scene, const AblationSpec& spec);

/// Transforms every scene of `dataset` and writes the result under `out`
/// (manifest last). Provenance records the source, ops, seed and bank.
DatasetManifest apply_ablations(const DatasetManifest& dataset, const AblationSpec& spec,
                                const std::filesystem::path& out, int jobs);

}  // namespace segcx
