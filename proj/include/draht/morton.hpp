#pragma once

#include <array>
#include <cstdint>

namespace draht {

using Position = std::array<int32_t, 3>;

// Up to 21 bits per axis fit in a 63-bit code.
constexpr int kMaxDepth = 21;

//============================================================================
// Bit k of each axis lands at code bit 3k (x), 3k+1 (y), 3k+2 (z), so the
// octant index of a child within its parent is x | y << 1 | z << 2.

inline uint64_t
spreadBits(uint32_t v)
{
  uint64_t x = v & 0x1fffff;
  x = (x | x << 32) & 0x1f00000000ffffull;
  x = (x | x << 16) & 0x1f0000ff0000ffull;
  x = (x | x << 8) & 0x100f00f00f00f00full;
  x = (x | x << 4) & 0x10c30c30c30c30c3ull;
  x = (x | x << 2) & 0x1249249249249249ull;
  return x;
}

inline uint32_t
compactBits(uint64_t x)
{
  x &= 0x1249249249249249ull;
  x = (x ^ (x >> 2)) & 0x10c30c30c30c30c3ull;
  x = (x ^ (x >> 4)) & 0x100f00f00f00f00full;
  x = (x ^ (x >> 8)) & 0x1f0000ff0000ffull;
  x = (x ^ (x >> 16)) & 0x1f00000000ffffull;
  x = (x ^ (x >> 32)) & 0x1fffff;
  return uint32_t(x);
}

inline uint64_t
mortonEncode(const Position& p)
{
  return spreadBits(uint32_t(p[0])) | spreadBits(uint32_t(p[1])) << 1
    | spreadBits(uint32_t(p[2])) << 2;
}

inline Position
mortonDecode(uint64_t code)
{
  return {int32_t(compactBits(code)), int32_t(compactBits(code >> 1)),
          int32_t(compactBits(code >> 2))};
}

}  // namespace draht
