#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "draht/attributes.hpp"
#include "draht/point_cloud.hpp"

namespace draht {

//============================================================================
// One scale of the sum-pooling pyramid.  Node i of scale m covers the
// voxel at Morton code codes[i] with resolution depth - m.

struct ScaleLevel {
  int scale = 0;
  std::vector<uint64_t> codes;
  Attributes sums;
  std::vector<int64_t> weights;

  // index of each node's parent in scale m + 1 (empty at the top)
  std::vector<uint32_t> parent;

  // children of node i in scale m - 1 are [childBegin[i], childBegin[i+1])
  // (empty at scale 0)
  std::vector<uint32_t> childBegin;

  size_t size() const { return codes.size(); }
  Position position(size_t i) const { return mortonDecode(codes[i]); }

  // octant x | y << 1 | z << 2 of node i inside its parent
  int octant(size_t i) const { return int(codes[i] & 7); }
};

struct ChildRef {
  uint32_t index;
  std::array<int, 3> offset;
};

//============================================================================

struct Pyramid {
  std::vector<ScaleLevel> levels;
  int depth = 0;

  int scaleCount() const { return int(levels.size()) - 1; }
  const ScaleLevel& operator[](int m) const { return levels[size_t(m)]; }
};

// Levels 0..s by repeated 2x2x2 sum-pooling.  Throws CodecError when
// s > depth or the cloud is not canonical.
Pyramid buildPyramid(const VoxelizedPointCloud& cloud, int scaleCount);

// Appends the sum-pooled parent of the topmost level.
ScaleLevel poolLevel(ScaleLevel& child);

// Occupied children of node parentNode of level (scale m) inside the
// level below it.  Throws CodecError on an invalid index.
std::vector<ChildRef> childrenOf(
  const ScaleLevel& level, const ScaleLevel& childLevel, size_t parentNode);

// Averaged attributes A / w.
Attributes averages(const Attributes& sums, const std::vector<int64_t>& weights);

// Normalized attributes A / sqrt(w).
Attributes normalized(const Attributes& sums, const std::vector<int64_t>& weights);

}  // namespace draht
