#include "draht/partition.hpp"

#include <algorithm>
#include <numeric>

#include "draht/error.hpp"

namespace draht {

namespace {

  void
  split(
    const std::vector<Position>& positions,
    std::vector<uint32_t> idx,
    size_t budget,
    std::vector<std::vector<uint32_t>>& out)
  {
    if (idx.size() <= budget) {
      std::sort(idx.begin(), idx.end());
      out.push_back(std::move(idx));
      return;
    }

    Position lo = positions[idx[0]], hi = lo;
    for (uint32_t i : idx)
      for (int k = 0; k < 3; k++) {
        lo[k] = std::min(lo[k], positions[i][k]);
        hi[k] = std::max(hi[k], positions[i][k]);
      }
    int axis = 0;
    for (int k = 1; k < 3; k++)
      if (hi[k] - lo[k] > hi[axis] - lo[axis])
        axis = k;

    const size_t half = idx.size() / 2;
    std::nth_element(idx.begin(), idx.begin() + half, idx.end(), [&](uint32_t a, uint32_t b) {
      const int32_t ca = positions[a][axis], cb = positions[b][axis];
      return ca != cb ? ca < cb : a < b;
    });
    std::vector<uint32_t> upper(idx.begin() + half, idx.end());
    idx.resize(half);
    split(positions, std::move(idx), budget, out);
    split(positions, std::move(upper), budget, out);
  }

}  // namespace

std::vector<std::vector<uint32_t>>
partitionBlocks(const std::vector<Position>& positions, size_t budget)
{
  if (budget == 0)
    throw CodecError("block size must be positive");
  std::vector<std::vector<uint32_t>> out;
  std::vector<uint32_t> idx(positions.size());
  std::iota(idx.begin(), idx.end(), 0u);
  if (idx.empty())
    return out;
  split(positions, std::move(idx), budget, out);
  return out;
}

}  // namespace draht
