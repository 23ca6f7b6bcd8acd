#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace segcx {

std::uint64_t fnv1a64(std::string_view text);

// Mixes a run seed with a scene id and a stream tag into an independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view scene_id, std::uint64_t stream = 0);

// Platform-stable draws on top of mt19937_64 (no std distributions, whose
// output differs between standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace segcx
