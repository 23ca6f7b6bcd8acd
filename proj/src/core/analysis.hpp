#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/dataset.hpp"

namespace segcx {

enum class FactorLevel { kObject, kScene };

struct FactorSpec {
  const char* name;
  const char* group;  // object, scene, background or candidates
  FactorLevel level;
  bool bounded;   // values in [0, 1]
  double upper;   // histogram range end; unbounded factors add an overflow bin
};

// Every factor the analyzer can emit, in report order.
const std::vector<FactorSpec>& factor_table();

struct FactorSelection {
  bool object = false, scene = false, background = false, candidates = false;

  bool includes(const FactorSpec& spec) const;
};

// Comma-separated list of object,scene,background,candidates or all.
// Throws InvalidArgument.
FactorSelection parse_factor_selection(const std::string& list);

inline constexpr int kReportVersion = 1;
inline constexpr int kDefaultBins = 50;

struct AnalyzeConfig {
  FactorSelection factors{true, true, true, false};
  int bins = kDefaultBins;
  std::size_t hungarian_budget = 2048;
  std::uint64_t seed = 0;
  int jobs = 1;

  void validate() const;  // throws InvalidConfig
};

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::size_t overflow = 0;
};

Histogram make_histogram(const std::vector<double>& values, double upper, int bins, bool with_overflow);

struct Summary {
  std::size_t count = 0;
  std::size_t missing = 0;
  std::optional<double> mean, median, p5, p95;
};

// Percentiles interpolate linearly between order statistics.
Summary summarize(std::vector<double> values, std::size_t missing);

struct Sample {
  std::string scene_id;
  std::optional<std::uint16_t> object_id;
  std::size_t factor = 0;  // index into factor_table()
  std::optional<double> value;
};

struct FactorAnalysis {
  nlohmann::json report;
  std::vector<Sample> samples;  // scene order, then object order, then factor order
};

/// Computes the selected factors for every scene. Per-scene failures become
/// missing values with reasons; the result does not depend on config.jobs.
FactorAnalysis analyze_dataset(const DatasetManifest& dataset, const AnalyzeConfig& config);

// scene_id,object_id,factor,value with NA for missing values.
std::string samples_to_csv(const std::vector<Sample>& samples);

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace segcx
