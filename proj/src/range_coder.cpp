#include "draht/range_coder.hpp"

#include "draht/error.hpp"

namespace draht {

namespace {
  constexpr uint32_t kTop = 1u << 24;
}

//============================================================================

void
RangeEncoder::shiftLow()
{
  if (uint32_t(low_) < 0xff000000u || (low_ >> 32) != 0) {
    const uint8_t carry = uint8_t(low_ >> 32);
    uint8_t temp = cache_;
    do {
      out_.push_back(uint8_t(temp + carry));
      temp = 0xff;
    } while (--cacheSize_ != 0);
    cache_ = uint8_t(low_ >> 24);
  }
  cacheSize_++;
  low_ = (low_ & 0x00ffffffu) << 8;
}

void
RangeEncoder::normalize()
{
  while (range_ < kTop) {
    range_ <<= 8;
    shiftLow();
  }
}

void
RangeEncoder::encode(int bit, AdaptiveBit& ctx)
{
  any_ = true;
  const uint32_t bound = (range_ >> AdaptiveBit::kPrecision) * ctx.probZero;
  if (bit) {
    low_ += bound;
    range_ -= bound;
  } else {
    range_ = bound;
  }
  ctx.update(bit);
  normalize();
}

void
RangeEncoder::encodeBypass(int bit)
{
  any_ = true;
  range_ >>= 1;
  if (bit)
    low_ += range_;
  normalize();
}

std::vector<uint8_t>
RangeEncoder::finish()
{
  if (!any_)
    return {};
  for (int i = 0; i < 5; i++)
    shiftLow();
  // the first byte is always the zero-initialized cache
  out_.erase(out_.begin());
  return std::move(out_);
}

//============================================================================

RangeDecoder::RangeDecoder(std::span<const uint8_t> payload) : in_(payload)
{
  for (int i = 0; i < 4; i++)
    code_ = (code_ << 8) | nextByte();
}

uint8_t
RangeDecoder::nextByte()
{
  if (pos_ >= in_.size())
    throw CodecError("entropy payload truncated");
  return in_[pos_++];
}

void
RangeDecoder::normalize()
{
  while (range_ < kTop) {
    range_ <<= 8;
    code_ = (code_ << 8) | nextByte();
  }
}

int
RangeDecoder::decode(AdaptiveBit& ctx)
{
  const uint32_t bound = (range_ >> AdaptiveBit::kPrecision) * ctx.probZero;
  int bit;
  if (code_ < bound) {
    range_ = bound;
    bit = 0;
  } else {
    code_ -= bound;
    range_ -= bound;
    bit = 1;
  }
  ctx.update(bit);
  normalize();
  return bit;
}

int
RangeDecoder::decodeBypass()
{
  range_ >>= 1;
  int bit = 0;
  if (code_ >= range_) {
    code_ -= range_;
    bit = 1;
  }
  normalize();
  return bit;
}

//============================================================================

std::vector<uint8_t>
encodeBits(std::span<const uint8_t> bits, bool adaptive)
{
  RangeEncoder enc;
  AdaptiveBit ctx;
  for (uint8_t b : bits) {
    if (adaptive)
      enc.encode(b, ctx);
    else
      enc.encodeBypass(b);
  }
  return enc.finish();
}

std::vector<uint8_t>
decodeBits(std::span<const uint8_t> payload, size_t count, bool adaptive)
{
  if (count == 0)
    return {};
  RangeDecoder dec(payload);
  AdaptiveBit ctx;
  std::vector<uint8_t> out(count);
  for (auto& b : out)
    b = uint8_t(adaptive ? dec.decode(ctx) : dec.decodeBypass());
  return out;
}

}  // namespace draht
