#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "draht/error.hpp"

namespace draht {

//============================================================================
// Zero run-length form of an integer sequence: each non-zero value is
// preceded by the count of zeros before it.  Zeros after the last value are
// carried separately.

struct RunValue {
  uint64_t run = 0;
  int64_t value = 0;

  bool operator==(const RunValue&) const = default;
};

struct RunLengthStream {
  std::vector<RunValue> entries;
  uint64_t trailingZeros = 0;

  bool operator==(const RunLengthStream&) const = default;
};

RunLengthStream rleEncode(std::span<const int64_t> values);

// Throws CodecError when the stream does not describe exactly `length`
// elements.
std::vector<int64_t> rleDecode(const RunLengthStream& stream, size_t length);

//============================================================================
// Binarization.
//
// run:   run < 3            unary, run ones then a zero
//        3 <= run < 19      "111", truncated Rice k = 2 of run - 3
//                           (quotient in unary, zero terminated, then two
//                           remainder bits)
//        run >= 19          "111" "1111" then order-0 exp-Golomb of run - 19
// value: sign bit (1 = negative), order-0 exp-Golomb of |value| - 1
//
// Each bin carries a context; bins not listed as context coded are bypass.

constexpr uint64_t kUnaryLimit = 3;
constexpr int kRiceParam = 2;
constexpr uint64_t kRiceRange = 16;
constexpr uint64_t kRiceEscapeQuotient = kRiceRange >> kRiceParam;

enum class BinContext : uint8_t {
  kRunPrefix0,  // unary bins 0..2 and the first Rice quotient bin
  kRunPrefix1,
  kRunPrefix2,
  kRunPrefix3,
  kSign,
  kMagnitude0,  // first two exp-Golomb prefix bins of |value| - 1
  kMagnitude1,
  kBypass,
};

constexpr size_t kContextCount = size_t(BinContext::kBypass);

//----------------------------------------------------------------------------

template<typename Sink>
void
writeExpGolomb(Sink& sink, uint64_t n, int contextBins = 0)
{
  if (n >= (uint64_t(1) << 62))
    throw CodecError("exp-Golomb value out of range");
  const uint64_t x = n + 1;
  const int len = std::bit_width(x);
  for (int i = 0; i < len - 1; i++)
    sink.put(0, i < contextBins ? BinContext(int(BinContext::kMagnitude0) + i)
                                : BinContext::kBypass);
  const int terminator = len - 1;
  sink.put(1, terminator < contextBins
             ? BinContext(int(BinContext::kMagnitude0) + terminator)
             : BinContext::kBypass);
  for (int i = len - 2; i >= 0; i--)
    sink.put(int((x >> i) & 1), BinContext::kBypass);
}

template<typename Source>
uint64_t
readExpGolomb(Source& src, int contextBins = 0)
{
  int zeros = 0;
  for (;;) {
    const BinContext ctx = zeros < contextBins
      ? BinContext(int(BinContext::kMagnitude0) + zeros)
      : BinContext::kBypass;
    if (src.get(ctx))
      break;
    if (++zeros > 62)
      throw CodecError("corrupt exp-Golomb prefix");
  }
  uint64_t x = 1;
  for (int i = 0; i < zeros; i++)
    x = (x << 1) | uint64_t(src.get(BinContext::kBypass));
  return x - 1;
}

//----------------------------------------------------------------------------

template<typename Sink>
void
writeRun(Sink& sink, uint64_t run)
{
  for (uint64_t i = 0; i < kUnaryLimit; i++) {
    const BinContext ctx = BinContext(int(BinContext::kRunPrefix0) + int(i));
    if (run == i) {
      sink.put(0, ctx);
      return;
    }
    sink.put(1, ctx);
  }

  const uint64_t v = run - kUnaryLimit;
  const uint64_t q = v < kRiceRange ? v >> kRiceParam : kRiceEscapeQuotient;
  for (uint64_t j = 0; j < kRiceEscapeQuotient; j++) {
    const BinContext ctx = j == 0 ? BinContext::kRunPrefix3 : BinContext::kBypass;
    if (q == j) {
      sink.put(0, ctx);
      break;
    }
    sink.put(1, ctx);
  }
  if (q < kRiceEscapeQuotient) {
    for (int b = kRiceParam - 1; b >= 0; b--)
      sink.put(int((v >> b) & 1), BinContext::kBypass);
    return;
  }
  writeExpGolomb(sink, v - kRiceRange);
}

template<typename Source>
uint64_t
readRun(Source& src)
{
  for (uint64_t i = 0; i < kUnaryLimit; i++)
    if (!src.get(BinContext(int(BinContext::kRunPrefix0) + int(i))))
      return i;

  uint64_t q = 0;
  while (q < kRiceEscapeQuotient) {
    const BinContext ctx = q == 0 ? BinContext::kRunPrefix3 : BinContext::kBypass;
    if (!src.get(ctx))
      break;
    q++;
  }
  if (q < kRiceEscapeQuotient) {
    uint64_t rem = 0;
    for (int b = 0; b < kRiceParam; b++)
      rem = (rem << 1) | uint64_t(src.get(BinContext::kBypass));
    return kUnaryLimit + (q << kRiceParam) + rem;
  }
  return kUnaryLimit + kRiceRange + readExpGolomb(src);
}

//----------------------------------------------------------------------------

template<typename Sink>
void
writeValue(Sink& sink, int64_t value)
{
  if (value == 0)
    throw CodecError("run-length value must be non-zero");
  sink.put(value < 0 ? 1 : 0, BinContext::kSign);
  const uint64_t mag = value < 0 ? uint64_t(-(value + 1)) + 1 : uint64_t(value);
  writeExpGolomb(sink, mag - 1, 2);
}

template<typename Source>
int64_t
readValue(Source& src)
{
  const bool negative = src.get(BinContext::kSign);
  const uint64_t mag = readExpGolomb(src, 2) + 1;
  return negative ? -int64_t(mag) : int64_t(mag);
}

//----------------------------------------------------------------------------
// A trailing run that reaches `length` doubles as the end marker; after a
// run ending exactly at `length` no value follows.

template<typename Sink>
void
writeStream(Sink& sink, const RunLengthStream& stream)
{
  for (const auto& e : stream.entries) {
    writeRun(sink, e.run);
    writeValue(sink, e.value);
  }
  if (stream.trailingZeros > 0)
    writeRun(sink, stream.trailingZeros);
}

template<typename Source>
RunLengthStream
readStream(Source& src, uint64_t length)
{
  RunLengthStream out;
  uint64_t pos = 0;
  while (pos < length) {
    const uint64_t run = readRun(src);
    if (run > length - pos)
      throw CodecError("run-length stream overruns its length");
    pos += run;
    if (pos == length) {
      out.trailingZeros = run;
      break;
    }
    out.entries.push_back({run, readValue(src)});
    pos++;
  }
  return out;
}

//============================================================================
// Bins as '0'/'1' characters, for inspection and testing.

struct BitStringSink {
  std::string bits;
  void put(int bit, BinContext) { bits.push_back(bit ? '1' : '0'); }
};

struct BitStringSource {
  std::string_view bits;
  size_t pos = 0;

  int get(BinContext)
  {
    if (pos >= bits.size())
      throw CodecError("bit string exhausted");
    return bits[pos++] == '1';
  }
};

std::string expGolombBits(uint64_t n);
std::string runBits(uint64_t run);
std::string valueBits(int64_t value);

}  // namespace draht
