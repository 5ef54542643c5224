#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace draht {

//============================================================================
// Binary range coder with adaptive per-context probabilities.
//
// Probabilities of a zero bin are 16-bit (initial 1/2) and move by 1/32 of
// the distance to the observed bin after each use.  The coder keeps a
// 32-bit range that is renormalized a byte at a time whenever it drops
// below 2^24, with carry propagation through a cached byte.  Bypass bins
// halve the range.  See docs/bitstream.md.

struct AdaptiveBit {
  static constexpr int kPrecision = 16;
  static constexpr int kAdaptShift = 5;

  uint32_t probZero = 1u << (kPrecision - 1);

  void update(int bit)
  {
    if (bit)
      probZero -= probZero >> kAdaptShift;
    else
      probZero += ((1u << kPrecision) - probZero) >> kAdaptShift;
  }
};

class RangeEncoder {
public:
  void encode(int bit, AdaptiveBit& ctx);
  void encodeBypass(int bit);

  // Flushes and returns the payload.  Nothing coded gives an empty payload.
  std::vector<uint8_t> finish();

private:
  void shiftLow();
  void normalize();

  uint64_t low_ = 0;
  uint32_t range_ = 0xffffffffu;
  uint8_t cache_ = 0;
  uint64_t cacheSize_ = 1;
  bool any_ = false;
  std::vector<uint8_t> out_;
};

class RangeDecoder {
public:
  // Throws CodecError if the payload is too short to initialize.
  explicit RangeDecoder(std::span<const uint8_t> payload);

  int decode(AdaptiveBit& ctx);
  int decodeBypass();

private:
  uint8_t nextByte();
  void normalize();

  std::span<const uint8_t> in_;
  size_t pos_ = 0;
  uint32_t code_ = 0;
  uint32_t range_ = 0xffffffffu;
};

//----------------------------------------------------------------------------
// Convenience for coding a plain bit sequence under a single context.

std::vector<uint8_t> encodeBits(std::span<const uint8_t> bits, bool adaptive = true);
std::vector<uint8_t> decodeBits(
  std::span<const uint8_t> payload, size_t count, bool adaptive = true);

}  // namespace draht
