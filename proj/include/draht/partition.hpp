#pragma once

#include <cstdint>
#include <vector>

#include "draht/morton.hpp"

namespace draht {

// Median split along the widest axis until every block holds at most
// `budget` points.  Depends on geometry only, so a decoder reproduces the
// same blocks.  Indices inside a block keep their input (Morton) order;
// blocks are listed depth-first, lower half before upper half.
std::vector<std::vector<uint32_t>> partitionBlocks(
  const std::vector<Position>& positions, size_t budget);

}  // namespace draht
