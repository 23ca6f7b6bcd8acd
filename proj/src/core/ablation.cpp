#include "core/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/maskgeo.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace segcx {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct OpName {
  AblationOp op;
  const char* token;
};

constexpr OpName kOpNames[] = {
    {AblationOp::kS, "S"},     {AblationOp::kT, "T"},     {AblationOp::kC, "C"},     {AblationOp::kU, "U"},
    {AblationOp::kBgS, "bgS"}, {AblationOp::kBgC, "bgC"}, {AblationOp::kBgT, "bgT"},
};

// Nearest set pixel of `src` to (x, y) by Euclidean distance; among equally
// near pixels the one with the smallest key(index) wins.
template <typename Key>
std::size_t nearest_set_pixel(const BinaryMask& src, int x, int y, Key key) {
  const int w = src.width(), h = src.height();
  const int r_max = std::max(w, h);
  std::size_t best = kNone;
  long long best_d = std::numeric_limits<long long>::max();
  const auto consider = [&](int px, int py) {
    if (!src.test(px, py)) return;
    const long long dx = px - x, dy = py - y;
    const long long d = dx * dx + dy * dy;
    const std::size_t i = static_cast<std::size_t>(py) * w + px;
    if (d < best_d || (d == best_d && key(i) < key(best))) {
      best_d = d;
      best = i;
    }
  };
  for (int r = 0; r <= r_max; ++r) {
    if (best != kNone && static_cast<long long>(r) * r > best_d) break;
    if (r == 0) {
      consider(x, y);
      continue;
    }
    for (int dx = -r; dx <= r; ++dx) {
      consider(x + dx, y - r);
      consider(x + dx, y + r);
    }
    for (int dy = -r + 1; dy <= r - 1; ++dy) {
      consider(x - r, y + dy);
      consider(x + r, y + dy);
    }
  }
  return best;
}

std::size_t nearest_set_pixel(const BinaryMask& src, int x, int y) {
  return nearest_set_pixel(src, x, y, [](std::size_t i) { return i; });
}

// Object indices by decreasing pixel count, then ascending id.
std::vector<std::size_t> paint_order(const SceneRecord& scene) {
  std::vector<std::size_t> order(scene.objects.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scene.objects[a].pixel_count > scene.objects[b].pixel_count;
  });
  return order;
}

// Round half up of sum / n for non-negative sums.
std::uint8_t rounded_mean(std::uint64_t sum, std::uint64_t n) {
  return static_cast<std::uint8_t>((2 * sum + n) / (2 * n));
}

Rgb mean_rgb(const RgbImage& image, const std::vector<std::size_t>& pixels) {
  std::array<std::uint64_t, 3> sum{0, 0, 0};
  for (std::size_t p : pixels) {
    const Rgb c = image.at(p);
    for (int ch = 0; ch < 3; ++ch) sum[ch] += c[ch];
  }
  const auto n = static_cast<std::uint64_t>(pixels.size());
  return {rounded_mean(sum[0], n), rounded_mean(sum[1], n), rounded_mean(sum[2], n)};
}

std::vector<std::size_t> pixels_of(const LabelMap& labels, std::uint16_t id) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.pixel_count(); ++i) {
    if (labels[i] == id) out.push_back(i);
  }
  return out;
}

void check_survivors(const SceneRecord& before, const LabelMap& after, const char* op) {
  std::map<std::uint16_t, std::size_t> counts;
  for (std::uint16_t l : after.labels()) ++counts[l];
  for (const ObjectInfo& obj : before.objects) {
    if (counts[obj.id] == 0) {
      fail(ErrorCode::kObjectVanished,
           std::string(op) + ": object " + std::to_string(obj.id) + " of scene " + before.id + " vanished");
    }
  }
}

double color_gap(const MeanColor& a, const MeanColor& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

// Max-min selection of k tiles, seeded with the most distant pair.
std::vector<std::size_t> distinctive_tiles(const TextureBank& bank, std::size_t k, Rng& rng) {
  const std::size_t n = bank.size();
  if (k == 1) return {static_cast<std::size_t>(rng.below(n))};
  std::size_t a = 0, b = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = color_gap(bank.means[i], bank.means[j]);
      if (d > best) {
        best = d;
        a = i;
        b = j;
      }
    }
  }
  std::vector<std::size_t> chosen = {a, b};
  std::vector<double> min_gap(n);
  for (std::size_t t = 0; t < n; ++t) {
    min_gap[t] = std::min(color_gap(bank.means[t], bank.means[a]), color_gap(bank.means[t], bank.means[b]));
  }
  while (chosen.size() < k) {
    std::size_t pick = kNone;
    for (std::size_t t = 0; t < n; ++t) {
      if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) continue;
      if (pick == kNone || min_gap[t] > min_gap[pick]) pick = t;
    }
    chosen.push_back(pick);
    for (std::size_t t = 0; t < n; ++t) min_gap[t] = std::min(min_gap[t], color_gap(bank.means[t], bank.means[pick]));
  }
  return chosen;
}

}  // namespace

const char* ablation_op_name(AblationOp op) {
  for (const OpName& n : kOpNames) {
    if (n.op == op) return n.token;
  }
  return "?";
}

std::vector<AblationOp> parse_ablation_ops(const std::string& list) {
  std::vector<AblationOp> ops;
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    const auto it = std::find_if(std::begin(kOpNames), std::end(kOpNames),
                                 [&](const OpName& n) { return token == n.token; });
    if (it == std::end(kOpNames)) fail(ErrorCode::kInvalidSpec, "unknown ablation op '" + token + "'");
    if (std::find(ops.begin(), ops.end(), it->op) != ops.end()) {
      fail(ErrorCode::kInvalidSpec, "duplicate ablation op '" + token + "'");
    }
    ops.push_back(it->op);
  }
  if (ops.empty()) fail(ErrorCode::kInvalidSpec, "empty ablation op list");
  std::sort(ops.begin(), ops.end());
  return ops;
}

bool AblationSpec::needs_bank() const {
  return std::find(ops.begin(), ops.end(), AblationOp::kT) != ops.end() ||
         std::find(ops.begin(), ops.end(), AblationOp::kBgT) != ops.end();
}

void AblationSpec::validate() const {
  if (ops.empty()) fail(ErrorCode::kInvalidSpec, "empty ablation op list");
  const std::set<AblationOp> unique(ops.begin(), ops.end());
  if (unique.size() != ops.size()) fail(ErrorCode::kInvalidSpec, "duplicate ablation op");
  if (needs_bank() && bank.size() == 0) fail(ErrorCode::kBankMissing, "texture ops need a non-empty texture bank");
}

SceneRecord ablate_object_color(const SceneRecord& scene) {
  SceneRecord out = scene;
  for (const ObjectInfo& obj : scene.objects) {
    const std::vector<std::size_t> pixels = pixels_of(scene.masks, obj.id);
    const Rgb mean = mean_rgb(scene.image, pixels);
    for (std::size_t p : pixels) out.image.set(p, mean);
  }
  return out;
}

SceneRecord ablate_object_shape(const SceneRecord& scene) {
  const int w = scene.masks.width();
  LabelMap labels = scene.masks;
  RgbImage image = scene.image;
  for (std::size_t k : paint_order(scene)) {
    const std::uint16_t id = scene.objects[k].id;
    const BinaryMask original = mask_of_label(scene.masks, id);
    const BinaryMask hull = convex_hull(original).hull;
    for (std::size_t p = 0; p < hull.size(); ++p) {
      if (!hull[p]) continue;
      labels[p] = id;
      if (original[p]) {
        image.set(p, scene.image.at(p));
      } else {
        const std::size_t q = nearest_set_pixel(original, static_cast<int>(p % w), static_cast<int>(p / w));
        image.set(p, scene.image.at(q));
      }
    }
  }
  check_survivors(scene, labels, "shape ablation");
  return make_scene(scene.id, std::move(image), std::move(labels));
}

SceneRecord ablate_scene_texture(const SceneRecord& scene, const TextureBank& bank, std::uint64_t seed) {
  const std::size_t k = scene.object_count();
  if (k == 0) return scene;
  if (bank.size() < k) {
    fail(ErrorCode::kBankTooSmall, "texture bank has " + std::to_string(bank.size()) + " tiles, scene " + scene.id +
                                       " needs " + std::to_string(k));
  }
  Rng rng(derive_seed(seed, scene.id, 3));
  std::vector<std::size_t> chosen = distinctive_tiles(bank, k, rng);
  for (std::size_t i = chosen.size(); i > 1; --i) std::swap(chosen[i - 1], chosen[rng.below(i)]);

  SceneRecord out = scene;
  const int w = scene.masks.width();
  for (std::size_t o = 0; o < k; ++o) {
    const ObjectInfo& obj = scene.objects[o];
    const RgbImage& tile = bank.tiles[chosen[o]];
    const int ox = static_cast<int>(rng.below(tile.width()));
    const int oy = static_cast<int>(rng.below(tile.height()));
    for (std::size_t p : pixels_of(scene.masks, obj.id)) {
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      out.image.set(p, tile.at((x - obj.box.min_x + ox) % tile.width(), (y - obj.box.min_y + oy) % tile.height()));
    }
  }
  return out;
}

SceneRecord ablate_scene_scale(const SceneRecord& scene, std::vector<std::uint16_t>* heavily_clipped) {
  const std::size_t k = scene.object_count();
  if (k < 2) fail(ErrorCode::kTooFewObjects, "scale ablation: scene " + scene.id + " has fewer than two objects");
  const int w = scene.masks.width(), h = scene.masks.height();

  std::vector<double> norm(k);
  double target = 0.0;
  for (std::size_t o = 0; o < k; ++o) {
    norm[o] = std::hypot(scene.objects[o].box.width(), scene.objects[o].box.height());
    target += norm[o];
  }
  target /= static_cast<double>(k);

  LabelMap labels(w, h, 0);
  RgbImage image = scene.image;
  std::vector<std::size_t> expected(k, 0);

  for (std::size_t o : paint_order(scene)) {
    const ObjectInfo& obj = scene.objects[o];
    const BinaryMask original = mask_of_label(scene.masks, obj.id);
    double cx = 0.0, cy = 0.0;
    for (std::size_t p = 0; p < original.size(); ++p) {
      if (!original[p]) continue;
      cx += static_cast<double>(p % w);
      cy += static_cast<double>(p / w);
    }
    cx /= static_cast<double>(obj.pixel_count);
    cy /= static_cast<double>(obj.pixel_count);
    const double s = target / norm[o];
    const bool identity = s == 1.0;

    const int x_lo = static_cast<int>(std::floor(cx + (obj.box.min_x - 0.5 - cx) * s)) - 1;
    const int x_hi = static_cast<int>(std::ceil(cx + (obj.box.max_x + 0.5 - cx) * s)) + 1;
    const int y_lo = static_cast<int>(std::floor(cy + (obj.box.min_y - 0.5 - cy) * s)) - 1;
    const int y_hi = static_cast<int>(std::ceil(cy + (obj.box.max_y + 0.5 - cy) * s)) + 1;
    for (int y = y_lo; y <= y_hi; ++y) {
      const double sy = identity ? y : cy + (y - cy) / s;
      for (int x = x_lo; x <= x_hi; ++x) {
        const double sx = identity ? x : cx + (x - cx) / s;
        if (!original.test(static_cast<int>(std::floor(sx + 0.5)), static_cast<int>(std::floor(sy + 0.5)))) continue;
        ++expected[o];
        if (x < 0 || y < 0 || x >= w || y >= h) continue;

        const int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
        const double fx = sx - x0, fy = sy - y0;
        double acc[3] = {0.0, 0.0, 0.0};
        double weight = 0.0;
        for (int dy = 0; dy <= 1; ++dy) {
          for (int dx = 0; dx <= 1; ++dx) {
            const double wgt = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy);
            if (wgt <= 0.0 || !original.test(x0 + dx, y0 + dy)) continue;
            const Rgb c = scene.image.at(x0 + dx, y0 + dy);
            for (int ch = 0; ch < 3; ++ch) acc[ch] += wgt * c[ch];
            weight += wgt;
          }
        }
        Rgb c;
        for (int ch = 0; ch < 3; ++ch) c[ch] = static_cast<std::uint8_t>(std::lround(acc[ch] / weight));
        labels.set(x, y, obj.id);
        image.set(x, y, c);
      }
    }
  }

  const BinaryMask background = background_mask(scene.masks);
  const bool has_background = background.any();
  for (std::size_t p = 0; p < labels.pixel_count(); ++p) {
    if (labels[p] != 0 || scene.masks[p] == 0) continue;
    if (!has_background) continue;
    const std::size_t q = nearest_set_pixel(background, static_cast<int>(p % w), static_cast<int>(p / w));
    image.set(p, scene.image.at(q));
  }

  check_survivors(scene, labels, "scale ablation");
  if (heavily_clipped != nullptr) {
    std::map<std::uint16_t, std::size_t> counts;
    for (std::uint16_t l : labels.labels()) ++counts[l];
    for (std::size_t o = 0; o < k; ++o) {
      if (2 * counts[scene.objects[o].id] < expected[o]) heavily_clipped->push_back(scene.objects[o].id);
    }
  }
  return make_scene(scene.id, std::move(image), std::move(labels));
}

SceneRecord ablate_background_color(const SceneRecord& scene) {
  const std::vector<std::size_t> pixels = pixels_of(scene.masks, 0);
  if (pixels.empty()) fail(ErrorCode::kEmptyBackground, "scene " + scene.id + " has no background pixels");
  SceneRecord out = scene;
  const Rgb mean = mean_rgb(scene.image, pixels);
  for (std::size_t p : pixels) out.image.set(p, mean);
  return out;
}

SceneRecord ablate_background_texture(const SceneRecord& scene, const TextureBank& bank, std::uint64_t seed) {
  if (bank.size() == 0) fail(ErrorCode::kBankMissing, "background texture ablation needs a texture bank");
  const std::vector<std::size_t> pixels = pixels_of(scene.masks, 0);
  if (pixels.empty()) fail(ErrorCode::kEmptyBackground, "scene " + scene.id + " has no background pixels");

  MeanColor fg{0.0, 0.0, 0.0};
  std::size_t fg_count = 0;
  for (std::size_t p = 0; p < scene.masks.pixel_count(); ++p) {
    if (scene.masks[p] == 0) continue;
    const Rgb c = scene.image.at(p);
    for (int ch = 0; ch < 3; ++ch) fg[ch] += c[ch];
    ++fg_count;
  }
  std::size_t pick = 0;
  if (fg_count > 0) {
    for (double& v : fg) v /= static_cast<double>(fg_count);
    for (std::size_t t = 1; t < bank.size(); ++t) {
      if (color_gap(bank.means[t], fg) > color_gap(bank.means[pick], fg)) pick = t;
    }
  }
  const RgbImage& tile = bank.tiles[pick];
  Rng rng(derive_seed(seed, scene.id, 4));
  const int ox = static_cast<int>(rng.below(tile.width()));
  const int oy = static_cast<int>(rng.below(tile.height()));
  SceneRecord out = scene;
  const int w = scene.masks.width();
  for (std::size_t p : pixels) {
    const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
    out.image.set(p, tile.at((x + ox) % tile.width(), (y + oy) % tile.height()));
  }
  return out;
}

SceneRecord ablate_background_shape(const SceneRecord& scene) {
  const BinaryMask background = background_mask(scene.masks);
  if (!background.any()) fail(ErrorCode::kEmptyBackground, "scene " + scene.id + " has no background pixels");
  const int w = scene.masks.width();
  LabelMap labels = scene.masks;
  RgbImage image = scene.image;
  BinaryMask grown(scene.masks.width(), scene.masks.height());
  const auto key = [&](std::size_t i) { return std::pair<std::uint16_t, std::size_t>{scene.masks[i], i}; };
  for (const BinaryMask& region : subcontour_regions(background)) {
    const BinaryMask hull = convex_hull(region).hull;
    for (std::size_t p = 0; p < hull.size(); ++p) {
      if (!hull[p] || !background[p] || grown[p]) continue;
      const std::size_t q = nearest_set_pixel(region, static_cast<int>(p % w), static_cast<int>(p / w), key);
      labels[p] = scene.masks[q];
      image.set(p, scene.image.at(q));
      grown.set(p);
    }
  }
  return make_scene(scene.id, std::move(image), std::move(labels));
}

AblationResult apply_ablations(const SceneRecord& scene, const AblationSpec& spec) {
  AblationResult result{scene, {}};
  SceneRecord& cur = result.scene;
  for (AblationOp op : spec.ops) {
    switch (op) {
      case AblationOp::kS:
        cur = ablate_object_shape(cur);
        break;
      case AblationOp::kT:
        cur = ablate_scene_texture(cur, spec.bank, spec.seed);
        break;
      case AblationOp::kC:
        cur = ablate_object_color(cur);
        break;
      case AblationOp::kU: {
        std::vector<std::uint16_t> clipped;
        cur = ablate_scene_scale(cur, &clipped);
        for (std::uint16_t id : clipped) {
          result.warnings.push_back("object " + std::to_string(id) + " lost more than half of its pixels");
        }
        break;
      }
      case AblationOp::kBgS:
        cur = ablate_background_shape(cur);
        break;
      case AblationOp::kBgC:
        cur = ablate_background_color(cur);
        break;
      case AblationOp::kBgT:
        cur = ablate_background_texture(cur, spec.bank, spec.seed);
        break;
    }
  }
  return result;
}

DatasetManifest apply_ablations(const DatasetManifest& dataset, const AblationSpec& spec,
                                const std::filesystem::path& out, int jobs) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(out / "images", ec);
  std::filesystem::create_directories(out / "masks", ec);
  if (ec) fail(ErrorCode::kIoFailure, "cannot create " + out.string() + ": " + ec.message());

  const std::vector<std::vector<std::string>> warnings =
      parallel_map<std::vector<std::string>>(dataset.ids.size(), jobs, [&](std::size_t i) {
        AblationResult r = apply_ablations(load_scene(dataset, dataset.ids[i]), spec);
        write_scene_files(r.scene, out);
        return r.warnings;
      });

  nlohmann::json ops = nlohmann::json::array();
  for (AblationOp op : spec.ops) ops.push_back(ablation_op_name(op));
  nlohmann::json flagged = nlohmann::json::object();
  for (std::size_t i = 0; i < warnings.size(); ++i) {
    if (!warnings[i].empty()) flagged[dataset.ids[i]] = warnings[i];
  }

  DatasetManifest manifest;
  manifest.root = out;
  manifest.split = dataset.split;
  manifest.ids = dataset.ids;
  manifest.provenance = {
      {"source", dataset.root.generic_string()},
      {"source_provenance", dataset.provenance},
      {"ablation",
       {{"ops", ops},
        {"seed", spec.seed},
        {"texture_bank", spec.needs_bank() ? spec.bank_source : "none"},
        {"shape_fill", "nearest-original-pixel"},
        {"paint_order", "decreasing-area"},
        {"flagged", flagged}}},
  };
  write_manifest(manifest);
  return manifest;
}

}  // namespace segcx
