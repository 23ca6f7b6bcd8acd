#include "core/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace segcx {

namespace {

int uniform_int(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.below(hi - lo + 1)); }

std::uint8_t clamp8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

Rgb hue_color(double hue) {
  const double h = hue * 6.0;
  const double x = 1.0 - std::abs(std::fmod(h, 2.0) - 1.0);
  std::array<double, 3> c{};
  switch (static_cast<int>(h) % 6) {
    case 0: c = {1, x, 0}; break;
    case 1: c = {x, 1, 0}; break;
    case 2: c = {0, 1, x}; break;
    case 3: c = {0, x, 1}; break;
    case 4: c = {x, 0, 1}; break;
    default: c = {1, 0, x}; break;
  }
  return {clamp8(255 * c[0]), clamp8(255 * c[1]), clamp8(255 * c[2])};
}

// Shape membership inside an s x s box; every shape touches all four sides.
enum class Shape { kSquare, kDisc, kTriangle, kL, kU, kPlus, kT };

// Centered band of the given width across [0, s).
bool in_band(int v, int s, int width) { return v >= (s - width) / 2 && v < (s - width) / 2 + width; }

bool inside(Shape shape, int x, int y, int s, int notch) {
  const double c = (s - 1) / 2.0;
  switch (shape) {
    case Shape::kSquare:
      return true;
    case Shape::kDisc: {
      const double r = s / 2.0;
      return (x - c) * (x - c) + (y - c) * (y - c) <= r * r;
    }
    case Shape::kTriangle:
      // apex at the top center, base along the bottom row
      return std::abs(x - c) * (s - 1) <= c * (y + 1) + 1e-9;
    case Shape::kL:
      return x < s - notch || y >= notch;
    case Shape::kU:
      return !(y < notch && in_band(x, s, notch));
    case Shape::kPlus:
      return in_band(x, s, notch) || in_band(y, s, notch);
    case Shape::kT:
      return y < notch || in_band(x, s, notch);
  }
  return false;
}

Rgb offset(Rgb base, int dr, int dg, int db) {
  return {clamp8(base[0] + dr), clamp8(base[1] + dg), clamp8(base[2] + db)};
}

}  // namespace

const char* synth_kind_name(SynthKind kind) { return kind == SynthKind::kDsprites ? "dsprites" : "realistic"; }

SynthKind parse_synth_kind(const std::string& name) {
  if (name == "dsprites") return SynthKind::kDsprites;
  if (name == "realistic") return SynthKind::kRealistic;
  fail(ErrorCode::kInvalidArgument, "unknown generator kind '" + name + "'");
}

SceneRecord generate_scene(SynthKind kind, const std::string& id, int width, int height, std::uint64_t seed) {
  if (width < 32 || height < 32) fail(ErrorCode::kInvalidArgument, "generated scenes must be at least 32x32");
  Rng rng(derive_seed(seed, id, 7));
  const bool real = kind == SynthKind::kRealistic;
  const double unit = std::min(width, height) / 128.0;

  RgbImage image(width, height);
  LabelMap labels(width, height, 0);

  // Background.
  const Rgb bg_a = real ? Rgb{static_cast<std::uint8_t>(uniform_int(rng, 40, 215)),
                              static_cast<std::uint8_t>(uniform_int(rng, 40, 215)),
                              static_cast<std::uint8_t>(uniform_int(rng, 40, 215))}
                        : Rgb{static_cast<std::uint8_t>(uniform_int(rng, 0, 40)),
                              static_cast<std::uint8_t>(uniform_int(rng, 0, 40)),
                              static_cast<std::uint8_t>(uniform_int(rng, 0, 40))};
  const int ramp = real ? uniform_int(rng, -60, 60) : 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!real) {
        image.set(x, y, bg_a);
        continue;
      }
      const int shift = ramp * (x + y) / (width + height) + uniform_int(rng, -12, 12);
      image.set(x, y, offset(bg_a, shift, shift, shift));
    }
  }

  // Objects, one per quadrant.
  const int k = uniform_int(rng, 2, 4);
  std::array<int, 4> cells = {0, 1, 2, 3};
  for (int i = 3; i > 0; --i) std::swap(cells[i], cells[rng.below(i + 1)]);
  const int cell_w = width / 2, cell_h = height / 2;
  const Rgb palette = {static_cast<std::uint8_t>(uniform_int(rng, 60, 195)),
                       static_cast<std::uint8_t>(uniform_int(rng, 60, 195)),
                       static_cast<std::uint8_t>(uniform_int(rng, 60, 195))};
  const double hue0 = rng.uniform();

  for (int o = 0; o < k; ++o) {
    const int s = real ? static_cast<int>(std::lround(uniform_int(rng, 14, 44) * unit))
                       : static_cast<int>(std::lround(uniform_int(rng, 18, 24) * unit));
    const int cx0 = (cells[o] % 2) * cell_w, cy0 = (cells[o] / 2) * cell_h;
    const int slack_x = std::max(cell_w - s, 0), slack_y = std::max(cell_h - s, 0);
    const int x0 = cx0 + slack_x / 2 + uniform_int(rng, -slack_x / 6, slack_x / 6);
    const int y0 = cy0 + slack_y / 2 + uniform_int(rng, -slack_y / 6, slack_y / 6);

    Shape shape;
    int notch = 0;
    if (real) {
      constexpr std::array<Shape, 4> kConcave = {Shape::kL, Shape::kU, Shape::kPlus, Shape::kT};
      shape = kConcave[rng.below(kConcave.size())];
      notch = std::max(3, static_cast<int>(std::lround(s * (0.4 + 0.2 * rng.uniform()))));
    } else {
      constexpr std::array<Shape, 3> kConvex = {Shape::kSquare, Shape::kDisc, Shape::kTriangle};
      shape = kConvex[rng.below(kConvex.size())];
    }

    Rgb base;
    if (real) {
      base = offset(palette, uniform_int(rng, -35, 35), uniform_int(rng, -35, 35), uniform_int(rng, -35, 35));
    } else {
      base = hue_color(std::fmod(hue0 + static_cast<double>(o) / k + 0.1 * rng.uniform(), 1.0));
    }
    const int pattern = static_cast<int>(rng.below(3));
    const int period = uniform_int(rng, 2, 5);
    const int amplitude = uniform_int(rng, 25, 45);
    const Rgb second = offset(base, -amplitude, -amplitude / 2, amplitude / 2);

    const auto id_label = static_cast<std::uint16_t>(o + 1);
    for (int y = 0; y < s; ++y) {
      for (int x = 0; x < s; ++x) {
        if (!inside(shape, x, y, s, notch)) continue;
        const int px = x0 + x, py = y0 + y;
        if (px < 0 || py < 0 || px >= width || py >= height) continue;
        labels.set(px, py, id_label);
        if (!real) {
          image.set(px, py, base);
          continue;
        }
        bool alt = false;
        switch (pattern) {
          case 0: alt = (x / period) % 2 == 1; break;
          case 1: alt = ((x / period) + (y / period)) % 2 == 1; break;
          default: alt = rng.below(3) == 0; break;
        }
        const int n = uniform_int(rng, -8, 8);
        image.set(px, py, offset(alt ? second : base, n, n, n));
      }
    }
  }
  return make_scene(id, std::move(image), std::move(labels));
}

DatasetManifest generate_dataset(SynthKind kind, std::size_t count, int width, int height, std::uint64_t seed,
                                 const std::filesystem::path& out, int jobs) {
  if (count == 0) fail(ErrorCode::kInvalidArgument, "scene count must be positive");
  std::error_code ec;
  std::filesystem::create_directories(out / "images", ec);
  std::filesystem::create_directories(out / "masks", ec);
  if (ec) fail(ErrorCode::kIoFailure, "cannot create " + out.string() + ": " + ec.message());

  std::vector<std::string> ids(count);
  for (std::size_t i = 0; i < count; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "scene_%05zu", i);
    ids[i] = buf;
  }
  parallel_map<int>(count, jobs, [&](std::size_t i) {
    write_scene_files(generate_scene(kind, ids[i], width, height, seed), out);
    return 0;
  });

  DatasetManifest manifest;
  manifest.root = out;
  manifest.ids = ids;
  manifest.provenance = {{"generator", synth_kind_name(kind)},
                         {"seed", seed},
                         {"count", count},
                         {"width", width},
                         {"height", height}};
  write_manifest(manifest);
  return manifest;
}

}  // namespace segcx
