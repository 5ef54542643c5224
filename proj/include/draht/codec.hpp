#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "draht/attributes.hpp"
#include "draht/bitstream.hpp"
#include "draht/point_cloud.hpp"
#include "draht/predictor.hpp"
#include "draht/rate_proxy.hpp"

namespace draht {

//============================================================================

struct EncoderConfig {
  // one step per channel, or a single step shared by all channels
  std::vector<double> qs = {8.0};
  PredictionConfig prediction;
  // clouds above this many points are coded as independent blocks
  size_t blockSize = 2'000'000;
  unsigned threads = 1;
  RateProxyParams proxy;
};

inline PredictionConfig
noPrediction()
{
  PredictionConfig p;
  p.enabledFrom = -1;
  return p;
}

//----------------------------------------------------------------------------

struct ScaleStats {
  int scale = 0;
  size_t acCount = 0;
  std::vector<uint64_t> bits;      // actual payload bits per channel
  std::vector<double> proxyBits;   // rate-proxy estimate per channel
  size_t predictedChunks = 0;
  size_t refinedChunks = 0;
};

struct EncodeStats {
  size_t headerBytes = 0;
  size_t payloadBytes = 0;
  size_t totalBytes = 0;
  std::vector<ScaleStats> scales;  // indexed by child scale

  double payloadBits() const { return 8.0 * double(payloadBytes); }
  double proxyBits() const;
  // all quantized residuals of the stream, for rate-proxy fitting
  std::vector<int64_t> residuals;
};

// Reconstructed attribute sums of every scale, per chunk; used to check
// that decoder and encoder follow the same closed loop.
struct ReconstructionTrace {
  std::vector<std::vector<Attributes>> chunks;
};

struct EncodeResult {
  std::vector<uint8_t> bytes;
  EncodeStats stats;
  // encoder-side reconstruction, identical to what decode() returns
  VoxelizedPointCloud reconstruction;
};

// Throws CodecError on an empty or non-canonical cloud or an invalid
// configuration.
EncodeResult encode(
  const VoxelizedPointCloud& cloud,
  const EncoderConfig& config,
  ReconstructionTrace* trace = nullptr);

// encode() with prediction disabled at every scale.
EncodeResult encodeVanilla(
  const VoxelizedPointCloud& cloud, std::vector<double> qs, unsigned threads = 1);

// Decodes attributes onto `geometry`, which must hold exactly the encoded
// positions in canonical order; attributes of `geometry` are ignored.
// The refiner must match the one used at encode time whenever a scale
// was coded with compensation.
VoxelizedPointCloud decode(
  std::span<const uint8_t> bytes,
  const VoxelizedPointCloud& geometry,
  std::shared_ptr<const PredictionRefiner> refiner = nullptr,
  unsigned threads = 1,
  ReconstructionTrace* trace = nullptr);

}  // namespace draht
