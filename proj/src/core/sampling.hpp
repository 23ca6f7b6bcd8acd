#pragma once

#include <cstddef>
#include <vector>

#include "core/image.hpp"
#include "core/rng.hpp"

namespace segcx {

/// Raster indices of the set pixels of `mask`; when there are more than
/// `budget` (0 means unlimited), one pixel is drawn uniformly from each of `budget` equal-length
/// strata of the raster order, so every scanline band stays represented.
std::vector<std::size_t> stratified_sample(const BinaryMask& mask, std::size_t budget, Rng& rng);

}  // namespace segcx
