#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "core/dataset.hpp"

namespace segcx {

// kDsprites: flat saturated colors, convex sprites of similar size on a plain
// background. kRealistic: textured objects with concave outlines, widely
// varying sizes and similar palettes on a textured background.
enum class SynthKind { kDsprites, kRealistic };

const char* synth_kind_name(SynthKind kind);
SynthKind parse_synth_kind(const std::string& name);  // throws InvalidArgument

/// One scene with 2-4 non-overlapping objects, each inside its own quadrant
/// and with a square bounding box. Deterministic in (kind, id, seed).
SceneRecord generate_scene(SynthKind kind, const std::string& id, int width, int height, std::uint64_t seed);

// Scene ids are scene_00000, scene_00001, ...
DatasetManifest generate_dataset(SynthKind kind, std::size_t count, int width, int height, std::uint64_t seed,
                                 const std::filesystem::path& out, int jobs);

}  // namespace segcx
