#include "draht/neighbors.hpp"

#include <algorithm>

namespace draht {

NeighborTable
findNeighbors(const ScaleLevel& level)
{
  const size_t n = level.size();
  NeighborTable table;
  table.index.assign(n * kNeighborhoodSize, -1);

  const auto& codes = level.codes;
  for (size_t i = 0; i < n; i++) {
    const Position p = level.position(i);
    int32_t* row = table.index.data() + i * kNeighborhoodSize;
    row[kCenterTap] = int32_t(i);

    for (int dz = -1; dz <= 1; dz++) {
      for (int dy = -1; dy <= 1; dy++) {
        for (int dx = -1; dx <= 1; dx++) {
          const int tap = tapIndex(dx, dy, dz);
          if (tap == kCenterTap)
            continue;
          const Position q = {p[0] + dx, p[1] + dy, p[2] + dz};
          bool inside = true;
          for (int32_t c : q)
            inside &= c >= 0 && c < (int32_t(1) << kMaxDepth);
          if (!inside)
            continue;

          const uint64_t code = mortonEncode(q);
          // neighbours sit close in Morton order; search the nearer half
          auto it = code < codes[i]
            ? std::lower_bound(codes.begin(), codes.begin() + i, code)
            : std::lower_bound(codes.begin() + i, codes.end(), code);
          if (it != codes.end() && *it == code)
            row[tap] = int32_t(it - codes.begin());
        }
      }
    }
  }
  return table;
}

}  // namespace draht
