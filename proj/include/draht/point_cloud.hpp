#pragma once

#include <vector>

#include "draht/attributes.hpp"
#include "draht/morton.hpp"

namespace draht {

//============================================================================
// Integer voxel positions in [0, 2^depth)^3 with per-point attributes.
// Codec operations expect canonical form: unique positions in ascending
// Morton order.

struct VoxelizedPointCloud {
  int depth = 1;
  std::vector<Position> positions;
  Attributes attributes;
  // per-channel peak value used for PSNR
  std::vector<double> channelPeak;

  size_t size() const { return positions.size(); }
  size_t channels() const { return attributes.channels(); }

  bool operator==(const VoxelizedPointCloud&) const = default;
};

// Smallest depth >= 1 with every coordinate below 2^depth.
int inferDepth(const std::vector<Position>& positions);

// Sorts rows into Morton order.  Throws CodecError on duplicate or
// out-of-range positions, or a row count mismatch.
VoxelizedPointCloud canonicalize(VoxelizedPointCloud cloud);

bool isCanonical(const VoxelizedPointCloud& cloud);

// Throws CodecError unless the cloud is canonical.
void requireCanonical(const VoxelizedPointCloud& cloud);

}  // namespace draht
