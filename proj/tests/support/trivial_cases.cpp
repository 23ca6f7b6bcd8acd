#include "support/trivial_cases.hpp"

#include <cmath>
#include <filesystem>
#include <set>
#include <unistd.h>

#include "core/ablation.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/factors_background.hpp"
#include "core/factors_object.hpp"
#include "core/factors_scene.hpp"
#include "core/maskgeo.hpp"
#include "core/metrics.hpp"
#include "support/shapes.hpp"

namespace segcx::testing {

namespace {

namespace fs = std::filesystem;

template <typename Fn>
bool throws(ErrorCode code, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12; }
bool near(const std::optional<double>& a, double b) { return a && near(*a, b); }

fs::path scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("segcx-trivial-" + std::to_string(::getpid()) + "-" + tag);
  fs::remove_all(p);
  return p;
}

SceneRecord two_squares(Rgb a, Rgb b, int size_a = 10, int size_b = 10) {
  return flat_scene(64, 64, {rect_mask(64, 64, 2, 2, size_a, size_a), rect_mask(64, 64, 30, 30, size_b, size_b)},
                    {a, b}, {40, 40, 40});
}

std::vector<Rgb> object_colors(const SceneRecord& s) {
  std::vector<Rgb> out;
  for (const ObjectInfo& o : s.objects) {
    const BinaryMask m = mask_of_label(s.masks, o.id);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i]) {
        out.push_back(s.image.at(i));
        break;
      }
    }
  }
  return out;
}

bool object_uniform(const SceneRecord& s, std::uint16_t id) {
  std::set<Rgb> colors;
  for (std::size_t i = 0; i < s.masks.pixel_count(); ++i) {
    if (s.masks[i] == id) colors.insert(s.image.at(i));
  }
  return colors.size() == 1;
}

void add(std::vector<NamedCheck>& out, std::string name, std::function<bool()> fn) {
  out.push_back({std::move(name), std::move(fn)});
}

void dataset_checks(std::vector<NamedCheck>& out) {
  add(out, "scene record counts distinct labels", [] {
    LabelMap l(128, 128);
    l.set(1, 1, 3);
    l.set(5, 5, 7);
    l.set(6, 5, 7);
    return make_scene("s", RgbImage(128, 128), l).object_count() == 2;
  });
  add(out, "image and mask size mismatch", [] {
    return throws(ErrorCode::kDimensionMismatch, [] { make_scene("s", RgbImage(64, 64), LabelMap(128, 128)); });
  });
  add(out, "all-zero label map loads with no objects",
      [] { return make_scene("s", RgbImage(8, 8), LabelMap(8, 8)).object_count() == 0; });
  add(out, "prepare crops and resizes to target", [] {
    LabelMap l(640, 480);
    RgbImage img(640, 480, Rgb{9, 9, 9});
    paint(l, img, rect_mask(640, 480, 200, 100, 100, 100), 1, {200, 0, 0});
    paint(l, img, rect_mask(640, 480, 350, 250, 100, 100), 2, {0, 200, 0});
    const auto s = prepare_scene("s", img, l, PrepareConfig{});
    return s && s->image.width() == 128 && s->image.height() == 128 && s->object_count() == 2;
  });
  add(out, "prepare drops scenes below the object count", [] {
    LabelMap l(128, 128);
    RgbImage img(128, 128);
    paint(l, img, rect_mask(128, 128, 10, 10, 20, 20), 1, {255, 0, 0});
    return !prepare_scene("s", img, l, PrepareConfig{}).has_value();
  });
  add(out, "write three scenes", [] {
    const fs::path root = scratch("write3");
    std::vector<SceneRecord> scenes;
    for (const char* id : {"a", "b", "c"}) {
      SceneRecord s = two_squares({255, 0, 0}, {0, 0, 255});
      s.id = id;
      scenes.push_back(s);
    }
    const DatasetManifest m = write_dataset(scenes, root, Split::kTrain, {});
    const DatasetManifest back = read_manifest(root);
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(root)) files += e.path().extension() == ".png";
    fs::remove_all(root);
    return m.ids.size() == 3 && back.ids == m.ids && files == 6;
  });
  add(out, "duplicate scene id", [] {
    const fs::path root = scratch("dup");
    const SceneRecord s = two_squares({255, 0, 0}, {0, 0, 255});
    const bool ok = throws(ErrorCode::kDuplicateId, [&] { write_dataset({s, s}, root, Split::kTrain, {}); });
    const bool untouched = !fs::exists(root);
    fs::remove_all(root);
    return ok && untouched;
  });
  add(out, "write then reload is pixel identical", [] {
    const fs::path root = scratch("roundtrip");
    SceneRecord s = two_squares({255, 10, 0}, {0, 7, 255});
    s.masks.set(0, 0, 60000);
    s = make_scene("x", s.image, s.masks);
    const DatasetManifest m = write_dataset({s}, root, Split::kTest, {});
    const SceneRecord back = load_scene(read_manifest(root), "x");
    fs::remove_all(root);
    return back.image == s.image && back.masks == s.masks && m.split == Split::kTest;
  });
}

void maskgeo_checks(std::vector<NamedCheck>& out) {
  add(out, "hull of a filled rectangle is the rectangle", [] {
    const BinaryMask r = rect_mask(20, 20, 3, 4, 10, 10);
    return convex_hull(r).hull == r;
  });
  add(out, "two disjoint squares are two components", [] {
    const BinaryMask m = mask_union(rect_mask(12, 12, 0, 0, 3, 3), rect_mask(12, 12, 6, 6, 3, 3));
    const auto c = connected_components(m, Connectivity::kFour);
    return c.size() == 2 && c[0].count() == 9 && c[1].count() == 9;
  });
  add(out, "empty mask has no components",
      [] { return connected_components(BinaryMask(5, 5), Connectivity::kEight).empty(); });
  add(out, "centered disk is one enclosed region", [] {
    const BinaryMask d = disk(32, 32, 15.5, 15.5, 8);
    const auto r = subcontour_regions(mask_complement(d));
    return r.size() == 1 && r[0] == d;
  });
  add(out, "adjacent objects form one region", [] {
    const BinaryMask fg = mask_union(rect_mask(32, 32, 4, 4, 6, 6), rect_mask(32, 32, 10, 4, 6, 6));
    const auto r = subcontour_regions(mask_complement(fg));
    return r.size() == 1 && r[0] == fg;
  });
  add(out, "blank background has no regions",
      [] { return subcontour_regions(BinaryMask(16, 16, true)).empty(); });
  add(out, "straight corridor distances", [] {
    const BinaryMask domain = rect_mask(10, 1, 0, 0, 10, 1);
    BinaryMask src(10, 1);
    src.set(0, 0);
    const std::vector<int> d = constrained_distance_transform(domain, src);
    for (int i = 0; i < 10; ++i) {
      if (d[i] != i) return false;
    }
    return true;
  });
  add(out, "source outside the domain reaches nothing", [] {
    const BinaryMask domain = rect_mask(10, 10, 0, 0, 5, 10);
    BinaryMask src(10, 10);
    src.set(8, 8);
    const std::vector<int> d = constrained_distance_transform(domain, src);
    return std::all_of(d.begin(), d.end(), [](int v) { return v == kUnreachable; });
  });
  add(out, "convex disk is its own inscribed set", [] {
    const BinaryMask d = disk(40, 40, 20, 20, 15);
    return max_inscribed_convex_set(d).set == d;
  });
  add(out, "single pixel inscribed set", [] {
    BinaryMask p(7, 7);
    p.set(3, 2);
    return max_inscribed_convex_set(p).set == p;
  });
  add(out, "bounding box of a 4x7 rectangle", [] {
    const BoundingBox b = bounding_box(rect_mask(20, 20, 5, 6, 4, 7));
    return b.width() == 4 && b.height() == 7;
  });
  add(out, "bounding box of a single pixel", [] {
    BinaryMask p(5, 5);
    p.set(2, 2);
    const BoundingBox b = bounding_box(p);
    return b.width() == 1 && b.height() == 1;
  });
  add(out, "erosion of a 5x5 square", [] {
    return erode_boundary(rect_mask(9, 9, 2, 2, 5, 5), 1) == rect_mask(9, 9, 3, 3, 3, 3);
  });
  add(out, "erosion width 0 is identity", [] {
    const BinaryMask m = l_shape(12, 12);
    return erode_boundary(m, 0) == m;
  });
  add(out, "erosion of a 2x2 square is empty", [] { return !erode_boundary(rect_mask(6, 6, 2, 2, 2, 2), 1).any(); });
}

void factor_checks(std::vector<NamedCheck>& out) {
  add(out, "uniform object has zero gradient", [] {
    const SceneRecord s = flat_scene(32, 32, {l_shape(32, 32, 5, 5, 2)}, {{90, 30, 200}});
    return object_color_gradient(s.image, mask_of_label(s.masks, 1)) == 0.0;
  });
  add(out, "gradient is translation invariant", [] {
    RgbImage img(40, 40, Rgb{0, 0, 0});
    BinaryMask m = rect_mask(40, 40, 4, 4, 10, 10);
    RgbImage moved(40, 40, Rgb{0, 0, 0});
    BinaryMask mm = rect_mask(40, 40, 9, 11, 10, 10);
    for (int y = 0; y < 10; ++y) {
      for (int x = 0; x < 10; ++x) {
        const auto v = static_cast<std::uint8_t>((x * 37 + y * 91) % 256);
        img.set(4 + x, 4 + y, {v, static_cast<std::uint8_t>(255 - v), v});
        moved.set(9 + x, 11 + y, {v, static_cast<std::uint8_t>(255 - v), v});
      }
    }
    return object_color_gradient(img, m) == object_color_gradient(moved, mm);
  });
  add(out, "filled rectangle has zero concavity",
      [] { return object_shape_concavity(rect_mask(20, 20, 1, 2, 13, 7)) == 0.0; });
  add(out, "uniform rectangle candidate factors", [] {
    const BinaryMask m = rect_mask(20, 20, 2, 2, 8, 5);
    const ObjectCandidates c = object_candidate_factors(RgbImage(20, 20, Rgb{5, 6, 7}), m);
    return c.color_count == 1 && c.color_entropy == 0.0 && c.non_rectangularity == 0.0 && c.discontinuity == 0.0;
  });
  add(out, "two disjoint squares have discontinuity one half", [] {
    const BinaryMask m = mask_union(rect_mask(12, 12, 0, 0, 3, 3), rect_mask(12, 12, 6, 6, 3, 3));
    return object_candidate_factors(RgbImage(12, 12), m).discontinuity == 0.5;
  });
  add(out, "shared mean color gives similarity one",
      [] { return inter_object_color_similarity(two_squares({10, 20, 30}, {10, 20, 30})) == 1.0; });
  add(out, "black and white objects give similarity zero",
      [] { return near(inter_object_color_similarity(two_squares({0, 0, 0}, {255, 255, 255})), 0.0); });
  add(out, "identical boxes give zero shape variation",
      [] { return inter_object_shape_variation(two_squares({1, 1, 1}, {2, 2, 2})) == 0.0; });
  add(out, "shape variation ignores object order", [] {
    const BinaryMask a = rect_mask(64, 64, 0, 0, 5, 9), b = rect_mask(64, 64, 20, 0, 12, 3),
                     c = rect_mask(64, 64, 0, 30, 20, 20);
    const double one = inter_object_shape_variation(flat_scene(64, 64, {a, b, c}, {{1, 1, 1}}));
    const double two = inter_object_shape_variation(flat_scene(64, 64, {c, a, b}, {{1, 1, 1}}));
    return one == two && inter_object_color_similarity(flat_scene(64, 64, {a, b, c}, {{9, 0, 0}, {0, 9, 0}, {0, 0, 9}})) ==
                             inter_object_color_similarity(flat_scene(64, 64, {c, a, b}, {{0, 0, 9}, {9, 0, 0}, {0, 9, 0}}));
  });
  add(out, "identical color multisets have zero chamfer distance", [] {
    const std::vector<Rgb> a = {{1, 2, 3}, {200, 0, 0}, {1, 2, 3}};
    return color_set_distance(a, {{200, 0, 0}, {1, 2, 3}, {1, 2, 3}}).chamfer == 0.0;
  });
  add(out, "equal areas have zero area variation",
      [] { return scene_candidate_factors(two_squares({1, 1, 1}, {200, 9, 9}), 1).area_variation == 0.0; });
  add(out, "single pixel objects 3-4-5 apart", [] {
    LabelMap l(8, 8);
    l.set(0, 0, 1);
    l.set(3, 4, 2);
    return scene_candidate_factors(make_scene("s", RgbImage(8, 8), l), 0).centroid_proximity == 5.0;
  });
  add(out, "uniform background has zero gradient",
      [] { return bg_color_gradient(two_squares({255, 0, 0}, {0, 255, 0})) == 0.0; });
  add(out, "blank background has zero gradient", [] {
    const SceneRecord s = flat_scene(64, 64, {disk(64, 64, 20, 20, 9)}, {{50, 200, 50}}, {0, 0, 0});
    return bg_color_gradient(s) == 0.0;
  });
  add(out, "black background against white foreground", [] {
    const SceneRecord s = flat_scene(64, 64, {disk(64, 64, 30, 30, 12)}, {{255, 255, 255}}, {0, 0, 0});
    return near(bg_fg_color_similarity(s, kDefaultPixelBudget, 3), 0.0);
  });
  add(out, "single shared color gives similarity one", [] {
    const SceneRecord s = flat_scene(64, 64, {disk(64, 64, 30, 30, 12)}, {{70, 80, 90}}, {70, 80, 90});
    return bg_fg_color_similarity(s, kDefaultPixelBudget, 3) == 1.0;
  });
  add(out, "rectangular region has zero irregularity", [] {
    const SceneRecord s = flat_scene(64, 64, {rect_mask(64, 64, 10, 12, 30, 17)}, {{255, 0, 0}});
    return bg_shape_irregularity(s).irregularity == 0.0;
  });
  add(out, "irregularity averages over regions", [] {
    const SceneRecord one = flat_scene(64, 64, {l_shape(64, 64, 40, 40, 2)}, {{255, 0, 0}});
    const SceneRecord two =
        flat_scene(64, 64, {rect_mask(64, 64, 3, 3, 12, 9), l_shape(64, 64, 40, 40, 2)}, {{0, 255, 0}, {255, 0, 0}});
    const double s = bg_shape_irregularity(one).irregularity;
    return s > 0.0 && near(bg_shape_irregularity(two).irregularity, s / 2.0);
  });
}

void ablation_checks(std::vector<NamedCheck>& out) {
  add(out, "two-tone object flattens to its rounded mean", [] {
    LabelMap l(16, 16);
    RgbImage img(16, 16, Rgb{30, 30, 30});
    paint(l, img, rect_mask(16, 16, 2, 2, 4, 4), 1, {0, 0, 0});
    paint(l, img, rect_mask(16, 16, 6, 2, 4, 4), 1, {255, 255, 255});
    const SceneRecord a = ablate_object_color(make_scene("s", img, l));
    return object_colors(a)[0] == Rgb{128, 128, 128} && object_uniform(a, 1) && a.masks == l;
  });
  add(out, "convex objects are untouched by shape ablation", [] {
    const SceneRecord s = two_squares({200, 0, 0}, {0, 0, 200});
    return ablate_object_shape(s).image == s.image && ablate_object_shape(s).masks == s.masks;
  });
  add(out, "uniform L grows into a uniform hull", [] {
    const BinaryMask l = l_shape(32, 32, 4, 4, 2);
    const SceneRecord a = ablate_object_shape(flat_scene(32, 32, {l}, {{12, 200, 99}}));
    return mask_of_label(a.masks, 1) == convex_hull(l).hull && object_uniform(a, 1) &&
           object_colors(a)[0] == Rgb{12, 200, 99};
  });
  add(out, "texture ablation picks the extreme pair", [] {
    TextureBank bank;
    for (Rgb c : {Rgb{128, 128, 128}, Rgb{10, 10, 10}, Rgb{200, 30, 30}, Rgb{245, 245, 245}}) bank.add(flat_tile(c));
    const SceneRecord a = ablate_scene_texture(two_squares({90, 90, 90}, {100, 100, 100}), bank, 5);
    const std::vector<Rgb> c = object_colors(a);
    const std::set<Rgb> got(c.begin(), c.end());
    return got == std::set<Rgb>{{10, 10, 10}, {245, 245, 245}};
  });
  add(out, "texture ablation is deterministic", [] {
    const TextureBank bank = builtin_texture_bank();
    const SceneRecord s = two_squares({90, 90, 90}, {100, 100, 100});
    return ablate_scene_texture(s, bank, 77).image == ablate_scene_texture(s, bank, 77).image;
  });
  add(out, "equal sizes are untouched by scale ablation", [] {
    const SceneRecord s = two_squares({200, 0, 0}, {0, 0, 200});
    const SceneRecord a = ablate_scene_scale(s);
    return a.image == s.image && a.masks == s.masks;
  });
  add(out, "uniform background is a fixed point of bgC", [] {
    const SceneRecord s = two_squares({200, 0, 0}, {0, 0, 200});
    return ablate_background_color(s).image == s.image;
  });
  add(out, "bgT picks the color farthest from the foreground", [] {
    TextureBank bank;
    for (Rgb c : {Rgb{255, 0, 0}, Rgb{255, 255, 255}, Rgb{100, 100, 100}}) bank.add(flat_tile(c));
    const SceneRecord s = flat_scene(64, 64, {disk(64, 64, 30, 30, 12)}, {{0, 0, 0}}, {0, 0, 0});
    const SceneRecord a = ablate_background_texture(s, bank, 1);
    return a.image.at(0, 0) == Rgb{255, 255, 255} && near(bg_fg_color_similarity(a, kDefaultPixelBudget, 1), 0.0);
  });
  add(out, "color ablation leaves single-colored objects", [] {
    AblationSpec spec;
    spec.ops = parse_ablation_ops("C");
    const SceneRecord s = ablate_scene_texture(two_squares({1, 1, 1}, {2, 2, 2}), builtin_texture_bank(), 3);
    const SceneRecord a = apply_ablations(s, spec).scene;
    return object_uniform(a, 1) && object_uniform(a, 2);
  });
  add(out, "empty op list", [] { return throws(ErrorCode::kInvalidSpec, [] { parse_ablation_ops(""); }); });
}

void metric_checks(std::vector<NamedCheck>& out) {
  // Two gt objects on 12x12.
  static const auto gt = [] {
    LabelMap l(12, 12);
    for (int y = 1; y < 5; ++y) {
      for (int x = 1; x < 6; ++x) l.set(x, y, 1);
    }
    for (int y = 6; y < 11; ++y) {
      for (int x = 5; x < 11; ++x) l.set(x, y, 2);
    }
    return l;
  };
  static const auto perfect = [] {
    return prediction_from({mask_of_label(gt(), 1), mask_of_label(gt(), 2)}, {0.6f, 0.95f});
  };
  static const auto none = [] {
    SegmentationPrediction p;
    p.width = p.height = 12;
    return p;
  };
  add(out, "identical prediction matches at IoU 1", [] {
    const MatchResult m = match_instances(gt(), binarize(perfect()).masks);
    return m.pairs.size() == 2 && m.pairs[0].iou == 1.0 && m.pairs[1].iou == 1.0 && m.unmatched_gt.empty();
  });
  add(out, "no predictions leave every gt unmatched",
      [] { return match_instances(gt(), {}).unmatched_gt.size() == 2; });
  add(out, "perfect AP", [] { return average_precision(gt(), binarize(perfect())) == 1.0; });
  add(out, "AP without predictions", [] { return average_precision(gt(), binarize(none())) == 0.0; });
  add(out, "perfect PQ", [] { return panoptic_quality(gt(), binarize(perfect())) == 1.0; });
  add(out, "PQ of one match reduces to its IoU", [] {
    const LabelMap g(10, 1, 1);
    return near(panoptic_quality(g, binarize(prediction_from({rect_mask(10, 1, 0, 0, 6, 1)}, {1.0f}))), 0.6);
  });
  add(out, "PQ with one false positive", [] {
    LabelMap g(20, 1);
    for (int x = 0; x < 10; ++x) g.set(x, 0, 1);
    const auto p = prediction_from({rect_mask(20, 1, 0, 0, 8, 1), rect_mask(20, 1, 14, 0, 3, 1)}, {1.0f, 0.9f});
    return near(panoptic_quality(g, binarize(p)), 0.8 / 1.5);
  });
  add(out, "perfect precision, recall and bg recall", [] {
    const PrecisionRecall pr = precision_recall(gt(), binarize(perfect()));
    return pr.precision == 1.0 && pr.recall == 1.0 && bg_recall(gt(), background_mask(gt())) == 1.0;
  });
  add(out, "halves at IoU 0.5 are not matches", [] {
    LabelMap g(8, 1, 1);
    const auto p = prediction_from({rect_mask(8, 1, 0, 0, 4, 1), rect_mask(8, 1, 4, 0, 4, 1)}, {1.0f, 1.0f});
    const PrecisionRecall pr = precision_recall(g, binarize(p));
    return pr.precision == 0.0 && pr.recall == 0.0;
  });
  add(out, "two of three gt found", [] {
    LabelMap g(9, 1);
    for (int x = 0; x < 9; ++x) g.set(x, 0, static_cast<std::uint16_t>(x / 3 + 1));
    const auto p = prediction_from({rect_mask(9, 1, 0, 0, 3, 1), rect_mask(9, 1, 3, 0, 3, 1)}, {1.0f, 1.0f});
    const PrecisionRecall pr = precision_recall(g, binarize(p));
    return pr.precision == 1.0 && near(pr.recall, 2.0 / 3.0);
  });
  add(out, "identical partitions have ARI 1", [] { return adjusted_rand(gt(), gt(), false) == 1.0; });
  add(out, "one-cluster partition has ARI 0", [] { return adjusted_rand(gt(), LabelMap(12, 12, 4), false) == 0.0; });
  add(out, "perfect ARP and ARR", [] {
    const RandPrecisionRecall r = rand_precision_recall(gt(), gt());
    return r.arp == 1.0 && r.arr == 1.0;
  });
  add(out, "perfect mBO", [] { return mean_best_overlap(gt(), binarize(perfect()).masks) == 1.0; });
  add(out, "mBO without predictions", [] { return mean_best_overlap(gt(), {}) == 0.0; });
  add(out, "mBO keeps the best overlap", [] {
    LabelMap g(10, 1, 1);
    return near(mean_best_overlap(g, {rect_mask(10, 1, 0, 0, 3, 1), rect_mask(10, 1, 3, 0, 7, 1)}), 0.7);
  });
  add(out, "perfect predictions score 1 on every metric", [] {
    const SceneMetrics m = evaluate_scene("s", gt(), perfect(), parse_metric_selection("all"));
    return std::all_of(m.values.begin(), m.values.end(), [](const auto& v) { return v.second == 1.0; });
  });
}

}  // namespace

std::vector<NamedCheck> trivial_checks() {
  std::vector<NamedCheck> out;
  dataset_checks(out);
  maskgeo_checks(out);
  factor_checks(out);
  ablation_checks(out);
  metric_checks(out);
  return out;
}

}  // namespace segcx::testing
