#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "draht/predictor.hpp"

namespace draht {

//============================================================================
// Container layout (little endian), see docs/bitstream.md:
//
//   "DRHT" u8:version u8:channels u8:depth u8:scaleCount
//   u64:pointCount u64:blockSize f64:qs[channels] u32:chunkCount
//   per chunk:
//     u64:pointCount
//     side info bits, zero padded to a byte:
//       per scale m = 0..s-1: predicted bit, refined bit
//       per channel: order-0 exp-Golomb of |rootDc|, sign bit if non-zero
//     u32:payloadBytes[s * channels]  (scale s-1 first, channel-minor)
//   u32:crc32 over the header bytes above followed by all payloads
//   payloads, in directory order

constexpr uint8_t kBitstreamVersion = 1;

struct ChunkHeader {
  uint64_t pointCount = 0;
  std::vector<ScaleMode> modes;     // indexed by child scale 0..s-1
  std::vector<int64_t> rootDc;      // quantized, per channel
  std::vector<uint32_t> payloadBytes;

  bool operator==(const ChunkHeader&) const = default;
};

struct BitstreamHeader {
  uint8_t version = kBitstreamVersion;
  uint8_t channels = 0;
  uint8_t depth = 0;
  uint8_t scaleCount = 0;
  uint64_t pointCount = 0;
  uint64_t blockSize = 0;
  std::vector<double> qs;
  std::vector<ChunkHeader> chunks;

  bool operator==(const BitstreamHeader&) const = default;
};

// position of the payload of child scale m, channel c in a chunk directory
inline size_t
payloadSlot(int scaleCount, int scale, size_t channels, size_t channel)
{
  return size_t(scaleCount - 1 - scale) * channels + channel;
}

struct Bitstream {
  BitstreamHeader header;
  // per chunk, in directory order
  std::vector<std::vector<std::vector<uint8_t>>> payloads;
  size_t headerBytes = 0;
};

// payloadBytes in the chunk headers are filled in from `payloads`.
std::vector<uint8_t> writeBitstream(Bitstream& stream);

// Throws CodecError on any malformed, truncated or tampered input.
Bitstream parseBitstream(std::span<const uint8_t> bytes);

}  // namespace draht
