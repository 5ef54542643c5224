#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "draht/range_coder.hpp"
#include "draht/run_length.hpp"

namespace draht {

//============================================================================
// Entropy coding of one quantized residual sequence: zero run-length form,
// binarization, then the range coder with a fresh context set.  An
// all-zero sequence (including the empty one) codes to an empty payload.

std::vector<uint8_t> encodeResiduals(std::span<const int64_t> values);

// Throws CodecError on truncated or inconsistent payloads.
std::vector<int64_t> decodeResiduals(std::span<const uint8_t> payload, size_t length);

//----------------------------------------------------------------------------

class RangeBinSink {
public:
  explicit RangeBinSink(RangeEncoder& enc) : enc_(enc) {}

  void put(int bit, BinContext ctx)
  {
    if (ctx == BinContext::kBypass)
      enc_.encodeBypass(bit);
    else
      enc_.encode(bit, contexts_[size_t(ctx)]);
  }

private:
  RangeEncoder& enc_;
  std::array<AdaptiveBit, kContextCount> contexts_{};
};

class RangeBinSource {
public:
  explicit RangeBinSource(RangeDecoder& dec) : dec_(dec) {}

  int get(BinContext ctx)
  {
    if (ctx == BinContext::kBypass)
      return dec_.decodeBypass();
    return dec_.decode(contexts_[size_t(ctx)]);
  }

private:
  RangeDecoder& dec_;
  std::array<AdaptiveBit, kContextCount> contexts_{};
};

}  // namespace draht
