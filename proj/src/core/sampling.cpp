#include "core/sampling.hpp"

namespace segcx {

std::vector<std::size_t> stratified_sample(const BinaryMask& mask, std::size_t budget, Rng& rng) {
  std::vector<std::size_t> all;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) all.push_back(i);
  }
  if (all.size() <= budget || budget == 0) return all;
  std::vector<std::size_t> out(budget);
  const std::size_t n = all.size();
  for (std::size_t k = 0; k < budget; ++k) {
    const std::size_t lo = k * n / budget;
    const std::size_t hi = (k + 1) * n / budget;
    out[k] = all[lo + rng.below(hi - lo)];
  }
  return out;
}

}  // namespace segcx
