#include "draht/run_length.hpp"

namespace draht {

RunLengthStream
rleEncode(std::span<const int64_t> values)
{
  RunLengthStream out;
  uint64_t run = 0;
  for (int64_t v : values) {
    if (v == 0) {
      run++;
      continue;
    }
    out.entries.push_back({run, v});
    run = 0;
  }
  out.trailingZeros = run;
  return out;
}

std::vector<int64_t>
rleDecode(const RunLengthStream& stream, size_t length)
{
  std::vector<int64_t> out;
  out.reserve(length);
  for (const auto& e : stream.entries) {
    if (e.value == 0)
      throw CodecError("run-length entry with zero value");
    if (e.run > length - out.size() || out.size() + e.run + 1 > length)
      throw CodecError("run-length stream longer than expected");
    out.insert(out.end(), e.run, 0);
    out.push_back(e.value);
  }
  if (out.size() + stream.trailingZeros != length)
    throw CodecError("run-length stream length mismatch");
  out.insert(out.end(), stream.trailingZeros, 0);
  return out;
}

//----------------------------------------------------------------------------

std::string
expGolombBits(uint64_t n)
{
  BitStringSink s;
  writeExpGolomb(s, n);
  return s.bits;
}

std::string
runBits(uint64_t run)
{
  BitStringSink s;
  writeRun(s, run);
  return s.bits;
}

std::string
valueBits(int64_t value)
{
  BitStringSink s;
  writeValue(s, value);
  return s.bits;
}

}  // namespace draht
