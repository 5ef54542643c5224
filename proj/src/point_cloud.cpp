#include "draht/point_cloud.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "draht/error.hpp"

namespace draht {

//============================================================================

int
inferDepth(const std::vector<Position>& positions)
{
  int32_t maxCoord = 0;
  for (const auto& p : positions)
    for (int32_t c : p)
      maxCoord = std::max(maxCoord, c);

  int depth = 1;
  while (depth < kMaxDepth && (int64_t(1) << depth) <= maxCoord)
    depth++;
  return depth;
}

//----------------------------------------------------------------------------

static void
checkRange(const VoxelizedPointCloud& cloud)
{
  if (cloud.depth < 1 || cloud.depth > kMaxDepth)
    throw CodecError("depth out of range: " + std::to_string(cloud.depth));
  if (cloud.attributes.rows() != cloud.positions.size())
    throw CodecError("attribute row count does not match position count");

  const int64_t limit = int64_t(1) << cloud.depth;
  for (const auto& p : cloud.positions)
    for (int32_t c : p)
      if (c < 0 || c >= limit)
        throw CodecError(
          "coordinate " + std::to_string(c) + " outside [0, 2^"
          + std::to_string(cloud.depth) + ")");
}

//----------------------------------------------------------------------------

VoxelizedPointCloud
canonicalize(VoxelizedPointCloud cloud)
{
  checkRange(cloud);

  const size_t n = cloud.size();
  std::vector<uint64_t> codes(n);
  for (size_t i = 0; i < n; i++)
    codes[i] = mortonEncode(cloud.positions[i]);

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return codes[a] < codes[b];
  });

  for (size_t i = 1; i < n; i++) {
    if (codes[order[i]] == codes[order[i - 1]]) {
      const auto& p = cloud.positions[order[i]];
      throw CodecError(
        "duplicate position (" + std::to_string(p[0]) + ", "
        + std::to_string(p[1]) + ", " + std::to_string(p[2]) + ")");
    }
  }

  VoxelizedPointCloud out;
  out.depth = cloud.depth;
  out.channelPeak = cloud.channelPeak;
  out.positions.resize(n);
  out.attributes = Attributes(n, cloud.channels());
  for (size_t i = 0; i < n; i++) {
    out.positions[i] = cloud.positions[order[i]];
    auto src = cloud.attributes.row(order[i]);
    std::copy(src.begin(), src.end(), out.attributes.row(i).begin());
  }
  if (out.channelPeak.size() != out.channels())
    out.channelPeak.assign(out.channels(), 255.0);
  return out;
}

//----------------------------------------------------------------------------

bool
isCanonical(const VoxelizedPointCloud& cloud)
{
  if (cloud.attributes.rows() != cloud.positions.size())
    return false;
  if (cloud.depth < 1 || cloud.depth > kMaxDepth)
    return false;

  const int64_t limit = int64_t(1) << cloud.depth;
  uint64_t prev = 0;
  for (size_t i = 0; i < cloud.size(); i++) {
    for (int32_t c : cloud.positions[i])
      if (c < 0 || c >= limit)
        return false;
    uint64_t code = mortonEncode(cloud.positions[i]);
    if (i > 0 && code <= prev)
      return false;
    prev = code;
  }
  return true;
}

void
requireCanonical(const VoxelizedPointCloud& cloud)
{
  if (!isCanonical(cloud))
    throw CodecError("point cloud is not in canonical Morton order");
}

}  // namespace draht
