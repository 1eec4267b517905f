#pragma once

// A small seven-feature problem with a known structure, used by tests, the
// acceptance suite and `gic synth`:
//   u0, u1  unchangeable
//   d0      direct, increase only, c+ = 1, bounds [0, 4]
//   d1      direct, decrease only, c- = 1, bounds [0, 4]
//   d2      direct, both ways,     c = 2,  bounds [0, 4]
//   i0 = 0.5 d0 + 0.3 u0 + noise,  i1 = 1 - 0.4 d1 + noise
// Raising d0, lowering d1 and moving d2 toward 2 all lower the risk score.

#include "gic/config.hpp"

#include <cstdint>
#include <string>

namespace gic {

/// CSV text with header u0,u1,d0,d1,d2,i0,i1,y (y is 1 or 0).
std::string synthetic_csv(std::size_t n, std::uint64_t seed);

/// Config matching synthetic_csv; dataset_path is left empty.
ExperimentConfig synthetic_config();

/// synthetic_csv parsed through synthetic_config.
LoadedData synthetic_data(std::size_t n, std::uint64_t seed);

} // namespace gic
