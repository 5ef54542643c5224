#include "draht/residual_coder.hpp"

#include <algorithm>

namespace draht {

std::vector<uint8_t>
encodeResiduals(std::span<const int64_t> values)
{
  if (std::all_of(values.begin(), values.end(), [](int64_t v) { return v == 0; }))
    return {};

  RangeEncoder enc;
  RangeBinSink sink(enc);
  writeStream(sink, rleEncode(values));
  return enc.finish();
}

std::vector<int64_t>
decodeResiduals(std::span<const uint8_t> payload, size_t length)
{
  if (payload.empty())
    return std::vector<int64_t>(length, 0);

  RangeDecoder dec(payload);
  RangeBinSource src(dec);
  return rleDecode(readStream(src, length), length);
}

}  // namespace draht
