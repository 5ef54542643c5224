#include "draht/pyramid.hpp"

#include <cmath>
#include <string>

#include "draht/error.hpp"

namespace draht {

//============================================================================
// Children of a parent are adjacent in Morton order, so a single pass that
// compares code >> 3 groups them without any hashing.

ScaleLevel
poolLevel(ScaleLevel& child)
{
  const size_t channels = child.sums.channels();
  ScaleLevel up;
  up.scale = child.scale + 1;

  const size_t n = child.size();
  child.parent.assign(n, 0);
  up.childBegin.reserve(n / 2 + 2);

  size_t count = 0;
  for (size_t i = 0; i < n; i++) {
    const uint64_t code = child.codes[i] >> 3;
    if (i == 0 || code != up.codes.back()) {
      up.codes.push_back(code);
      up.weights.push_back(0);
      up.childBegin.push_back(uint32_t(i));
      count++;
    }
    up.weights.back() += child.weights[i];
    child.parent[i] = uint32_t(count - 1);
  }
  up.childBegin.push_back(uint32_t(n));

  up.sums = Attributes(count, channels);
  for (size_t i = 0; i < n; i++) {
    auto dst = up.sums.row(child.parent[i]);
    auto src = child.sums.row(i);
    for (size_t c = 0; c < channels; c++)
      dst[c] += src[c];
  }
  return up;
}

//----------------------------------------------------------------------------

Pyramid
buildPyramid(const VoxelizedPointCloud& cloud, int scaleCount)
{
  if (scaleCount < 0 || scaleCount > cloud.depth)
    throw CodecError(
      "scale count " + std::to_string(scaleCount) + " exceeds depth "
      + std::to_string(cloud.depth));
  requireCanonical(cloud);

  Pyramid pyr;
  pyr.depth = cloud.depth;
  pyr.levels.reserve(size_t(scaleCount) + 1);

  ScaleLevel base;
  base.scale = 0;
  base.codes.resize(cloud.size());
  for (size_t i = 0; i < cloud.size(); i++)
    base.codes[i] = mortonEncode(cloud.positions[i]);
  base.sums = cloud.attributes;
  base.weights.assign(cloud.size(), 1);
  pyr.levels.push_back(std::move(base));

  for (int m = 0; m < scaleCount; m++) {
    ScaleLevel up = poolLevel(pyr.levels.back());
    pyr.levels.push_back(std::move(up));
  }
  return pyr;
}

//----------------------------------------------------------------------------

std::vector<ChildRef>
childrenOf(const ScaleLevel& level, const ScaleLevel& childLevel, size_t parentNode)
{
  if (level.childBegin.empty() || childLevel.scale + 1 != level.scale)
    throw CodecError("childrenOf: level has no child scale");
  if (parentNode >= level.size())
    throw CodecError(
      "childrenOf: node index " + std::to_string(parentNode) + " out of range");

  std::vector<ChildRef> out;
  for (uint32_t j = level.childBegin[parentNode]; j < level.childBegin[parentNode + 1]; j++) {
    const int o = childLevel.octant(j);
    out.push_back({j, {o & 1, (o >> 1) & 1, (o >> 2) & 1}});
  }
  return out;
}

//----------------------------------------------------------------------------

Attributes
averages(const Attributes& sums, const std::vector<int64_t>& weights)
{
  Attributes out(sums.rows(), sums.channels());
  for (size_t i = 0; i < sums.rows(); i++) {
    const double w = double(weights[i]);
    for (size_t c = 0; c < sums.channels(); c++)
      out(i, c) = sums(i, c) / w;
  }
  return out;
}

Attributes
normalized(const Attributes& sums, const std::vector<int64_t>& weights)
{
  Attributes out(sums.rows(), sums.channels());
  for (size_t i = 0; i < sums.rows(); i++) {
    const double sw = std::sqrt(double(weights[i]));
    for (size_t c = 0; c < sums.channels(); c++)
      out(i, c) = sums(i, c) / sw;
  }
  return out;
}

}  // namespace draht
