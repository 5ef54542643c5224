#pragma once

#include <cstdint>
#include <vector>

#include "draht/pyramid.hpp"

namespace draht {

// Offsets (dx, dy, dz) in {-1, 0, 1}^3 are numbered
// (dx + 1) + 3 * (dy + 1) + 9 * (dz + 1); 13 is the node itself.
constexpr int kNeighborhoodSize = 27;
constexpr int kCenterTap = 13;

inline int
tapIndex(int dx, int dy, int dz)
{
  return (dx + 1) + 3 * (dy + 1) + 9 * (dz + 1);
}

//============================================================================
// Same-scale 3x3x3 neighbours of every node; -1 marks an empty voxel.

struct NeighborTable {
  std::vector<int32_t> index;

  int32_t at(size_t node, int tap) const
  {
    return index[node * kNeighborhoodSize + size_t(tap)];
  }
};

NeighborTable findNeighbors(const ScaleLevel& level);

}  // namespace draht
