#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "segcx/segcx.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

int report(segcx_status status, const char* what) {
  if (status == SEGCX_OK) return kExitOk;
  std::fprintf(stderr, "segcx %s: %s: %s\n", what, segcx_status_name(status), segcx_last_error());
  return segcx_status_is_usage(status) ? kExitUsage : kExitData;
}

struct Shared {
  int jobs = 1;
  uint64_t seed = 0;
  std::string out;
};

void add_shared(CLI::App* cmd, Shared& shared, const char* out_help) {
  cmd->add_option("--jobs", shared.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", shared.seed, "Seed for all sampling and texture choices");
  cmd->add_option("--out", shared.out, out_help)->required();
}

// Opens a dataset, runs fn on it and closes it again.
template <typename Fn>
int with_dataset(const std::string& root, const char* what, Fn&& fn) {
  segcx_dataset* dataset = nullptr;
  const segcx_status open = segcx_dataset_open(root.c_str(), &dataset);
  if (open != SEGCX_OK) return report(open, what);
  const segcx_status status = fn(dataset);
  segcx_dataset_close(dataset);
  return report(status, what);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dataset complexity factors, ablations and segmentation metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", segcx_version());

  // prepare
  Shared prep_shared;
  std::string raw_dir;
  segcx_prepare_options prep;
  segcx_prepare_options_init(&prep);
  std::string split = "train";
  bool area_filter = false, blank = false;
  auto* cmd_prepare = app.add_subcommand("prepare", "Crop, resize and filter a raw corpus");
  cmd_prepare->add_option("raw", raw_dir, "Raw corpus with images/ and masks/")->required();
  add_shared(cmd_prepare, prep_shared, "Output dataset directory");
  cmd_prepare->add_option("--crop", prep.crop_size, "Center crop side (default: largest square)");
  cmd_prepare->add_option("--size", prep.target_size, "Output side length")->capture_default_str();
  cmd_prepare->add_option("--min-objects", prep.min_objects)->capture_default_str();
  cmd_prepare->add_option("--max-objects", prep.max_objects)->capture_default_str();
  cmd_prepare->add_flag("--area-filter", area_filter, "Drop objects outside the area-fraction bounds");
  cmd_prepare->add_option("--min-area", prep.min_area_fraction)->capture_default_str();
  cmd_prepare->add_option("--max-area", prep.max_area_fraction)->capture_default_str();
  cmd_prepare->add_flag("--blank-background", blank, "Set background pixels to black");
  auto* fraction_opt =
      cmd_prepare->add_option("--test-fraction", prep.test_fraction, "Hash split into out/train and out/test");
  cmd_prepare->add_option("--split", split, "Split name when --test-fraction is absent")
      ->check(CLI::IsMember({"train", "test"}))
      ->excludes(fraction_opt);

  // analyze
  Shared an_shared;
  std::string an_root, csv_path;
  segcx_analyze_options an;
  segcx_analyze_options_init(&an);
  std::string factors = an.factors;
  auto* cmd_analyze = app.add_subcommand("analyze", "Compute complexity factor distributions");
  cmd_analyze->add_option("dataset", an_root, "Dataset root")->required();
  add_shared(cmd_analyze, an_shared, "JSON report path");
  cmd_analyze->add_option("--factors", factors, "object,scene,background,candidates or all")->capture_default_str();
  cmd_analyze->add_option("--bins", an.bins, "Histogram bins")->capture_default_str();
  cmd_analyze->add_option("--csv", csv_path, "Also write per-sample values as CSV");
  cmd_analyze->add_option("--hungarian-budget", an.hungarian_budget, "Sampled pixels per side (0: all)")
      ->capture_default_str();

  // ablate
  Shared ab_shared;
  std::string ab_root, ops, textures;
  auto* cmd_ablate = app.add_subcommand("ablate", "Write a simplified copy of a dataset");
  cmd_ablate->add_option("dataset", ab_root, "Dataset root")->required();
  add_shared(cmd_ablate, ab_shared, "Output dataset directory");
  cmd_ablate->add_option("--ops", ops, "Comma list of C,S,T,U,bgC,bgT,bgS")->required();
  cmd_ablate->add_option("--textures", textures, "Directory of PNG texture tiles (default: built-in bank)");

  // evaluate
  Shared ev_shared;
  std::string ev_root, pred_dir;
  segcx_evaluate_options ev;
  segcx_evaluate_options_init(&ev);
  std::string metrics = ev.metrics;
  auto* cmd_evaluate = app.add_subcommand("evaluate", "Score predicted soft masks against ground truth");
  cmd_evaluate->add_option("dataset", ev_root, "Ground-truth dataset root")->required();
  cmd_evaluate->add_option("pred", pred_dir, "Prediction directory with <id>/<k>.png masks")->required();
  add_shared(cmd_evaluate, ev_shared, "metrics.json path");
  cmd_evaluate->add_option("--metrics", metrics, "ap,pq,pr,ari,fgari,arp-arr,mbo,bg-recall or all")
      ->capture_default_str();
  cmd_evaluate->add_option("--iou-thresh", ev.iou_threshold, "Match threshold (IoU must exceed it)")
      ->capture_default_str();

  // generate
  Shared gen_shared;
  std::string kind = "realistic";
  std::size_t count = 100;
  int width = 128, height = 128;
  auto* cmd_generate = app.add_subcommand("generate", "Write a synthetic corpus");
  add_shared(cmd_generate, gen_shared, "Output dataset directory");
  cmd_generate->add_option("--kind", kind, "dsprites or realistic")->capture_default_str();
  cmd_generate->add_option("--count", count)->capture_default_str();
  cmd_generate->add_option("--width", width)->capture_default_str();
  cmd_generate->add_option("--height", height)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (cmd_prepare->parsed()) {
    prep.area_filter = area_filter;
    prep.blank_background = blank;
    prep.split = split.c_str();
    prep.jobs = prep_shared.jobs;
    std::size_t kept = 0;
    const segcx_status s = segcx_prepare(raw_dir.c_str(), prep_shared.out.c_str(), &prep, &kept);
    if (s == SEGCX_OK) std::printf("prepared %zu scenes into %s\n", kept, prep_shared.out.c_str());
    return report(s, "prepare");
  }
  if (cmd_analyze->parsed()) {
    an.factors = factors.c_str();
    an.seed = an_shared.seed;
    an.jobs = an_shared.jobs;
    return with_dataset(an_root, "analyze", [&](segcx_dataset* d) {
      return segcx_analyze(d, &an, an_shared.out.c_str(), csv_path.empty() ? nullptr : csv_path.c_str());
    });
  }
  if (cmd_ablate->parsed()) {
    segcx_ablate_options ab;
    segcx_ablate_options_init(&ab);
    ab.ops = ops.c_str();
    ab.texture_dir = textures.empty() ? nullptr : textures.c_str();
    ab.seed = ab_shared.seed;
    ab.jobs = ab_shared.jobs;
    return with_dataset(ab_root, "ablate",
                        [&](segcx_dataset* d) { return segcx_ablate(d, &ab, ab_shared.out.c_str()); });
  }
  if (cmd_evaluate->parsed()) {
    ev.metrics = metrics.c_str();
    ev.jobs = ev_shared.jobs;
    return with_dataset(ev_root, "evaluate", [&](segcx_dataset* d) {
      return segcx_evaluate(d, pred_dir.c_str(), &ev, ev_shared.out.c_str());
    });
  }
  if (cmd_generate->parsed()) {
    return report(segcx_generate(kind.c_str(), count, width, height, gen_shared.seed, gen_shared.jobs,
                                 gen_shared.out.c_str()),
                  "generate");
  }
  return kExitUsage;
}
