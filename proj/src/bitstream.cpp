#include "draht/bitstream.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "draht/error.hpp"
#include "draht/run_length.hpp"

namespace draht {

namespace {

  constexpr char kMagic[4] = {'D', 'R', 'H', 'T'};

  class Writer {
  public:
    void raw(const void* p, size_t n)
    {
      auto* b = static_cast<const uint8_t*>(p);
      out.insert(out.end(), b, b + n);
    }
    void u8(uint8_t v) { out.push_back(v); }
    void uint(uint64_t v, int bytes)
    {
      for (int i = 0; i < bytes; i++)
        out.push_back(uint8_t(v >> (8 * i)));
    }
    void f64(double v) { uint(std::bit_cast<uint64_t>(v), 8); }

    std::vector<uint8_t> out;
  };

  class Reader {
  public:
    explicit Reader(std::span<const uint8_t> in) : in_(in) {}

    const uint8_t* take(size_t n)
    {
      if (n > in_.size() - pos_)
        throw CodecError("bitstream truncated");
      const uint8_t* p = in_.data() + pos_;
      pos_ += n;
      return p;
    }
    uint8_t u8() { return *take(1); }
    uint64_t uint(int bytes)
    {
      const uint8_t* p = take(size_t(bytes));
      uint64_t v = 0;
      for (int i = 0; i < bytes; i++)
        v |= uint64_t(p[i]) << (8 * i);
      return v;
    }
    double f64() { return std::bit_cast<double>(uint(8)); }
    size_t pos() const { return pos_; }
    std::span<const uint8_t> rest() const { return in_.subspan(pos_); }

  private:
    std::span<const uint8_t> in_;
    size_t pos_ = 0;
  };

  //--------------------------------------------------------------------------
  // MSB-first packing of side-info bins.

  struct PackedSink {
    std::vector<uint8_t> bytes;
    int used = 8;

    void put(int bit, BinContext)
    {
      if (used == 8) {
        bytes.push_back(0);
        used = 0;
      }
      if (bit)
        bytes.back() |= uint8_t(0x80 >> used);
      used++;
    }
  };

  struct PackedSource {
    Reader& reader;
    uint8_t cur = 0;
    int used = 8;

    int get(BinContext)
    {
      if (used == 8) {
        cur = reader.u8();
        used = 0;
      }
      return (cur >> (7 - used++)) & 1;
    }
  };

  uint32_t
  crcUpdate(uint32_t crc, const uint8_t* p, size_t n)
  {
    // zlib takes uInt lengths
    while (n > 0) {
      const size_t step = std::min<size_t>(n, 1u << 30);
      crc = uint32_t(::crc32(crc, p, uInt(step)));
      p += step;
      n -= step;
    }
    return crc;
  }

}  // namespace

//============================================================================

std::vector<uint8_t>
writeBitstream(Bitstream& stream)
{
  auto& h = stream.header;
  if (h.qs.size() != h.channels || stream.payloads.size() != h.chunks.size())
    throw CodecError("bitstream header is inconsistent");

  Writer w;
  w.raw(kMagic, 4);
  w.u8(h.version);
  w.u8(h.channels);
  w.u8(h.depth);
  w.u8(h.scaleCount);
  w.uint(h.pointCount, 8);
  w.uint(h.blockSize, 8);
  for (double q : h.qs)
    w.f64(q);
  w.uint(h.chunks.size(), 4);

  const size_t slots = size_t(h.scaleCount) * h.channels;
  for (size_t k = 0; k < h.chunks.size(); k++) {
    auto& ch = h.chunks[k];
    const auto& payloads = stream.payloads[k];
    if (ch.modes.size() != h.scaleCount || ch.rootDc.size() != h.channels
        || payloads.size() != slots)
      throw CodecError("bitstream chunk header is inconsistent");

    w.uint(ch.pointCount, 8);
    PackedSink side;
    for (const auto& m : ch.modes) {
      side.put(m.predicted, BinContext::kBypass);
      side.put(m.refined, BinContext::kBypass);
    }
    for (int64_t dc : ch.rootDc) {
      const uint64_t mag = dc < 0 ? uint64_t(-(dc + 1)) + 1 : uint64_t(dc);
      writeExpGolomb(side, mag);
      if (dc != 0)
        side.put(dc < 0, BinContext::kBypass);
    }
    w.raw(side.bytes.data(), side.bytes.size());

    ch.payloadBytes.resize(slots);
    for (size_t i = 0; i < slots; i++) {
      if (payloads[i].size() > UINT32_MAX)
        throw CodecError("payload too large");
      ch.payloadBytes[i] = uint32_t(payloads[i].size());
      w.uint(ch.payloadBytes[i], 4);
    }
  }

  uint32_t crc = crcUpdate(0, w.out.data(), w.out.size());
  for (const auto& chunk : stream.payloads)
    for (const auto& p : chunk)
      crc = crcUpdate(crc, p.data(), p.size());
  w.uint(crc, 4);
  stream.headerBytes = w.out.size();

  for (const auto& chunk : stream.payloads)
    for (const auto& p : chunk)
      w.raw(p.data(), p.size());
  return std::move(w.out);
}

//============================================================================

Bitstream
parseBitstream(std::span<const uint8_t> bytes)
{
  Reader r(bytes);
  if (std::memcmp(r.take(4), kMagic, 4) != 0)
    throw CodecError("not a DRHT bitstream");

  Bitstream stream;
  auto& h = stream.header;
  h.version = r.u8();
  if (h.version != kBitstreamVersion)
    throw CodecError("unsupported bitstream version " + std::to_string(h.version));
  h.channels = r.u8();
  h.depth = r.u8();
  h.scaleCount = r.u8();
  if (h.channels == 0 || h.depth < 1 || h.depth > 21 || h.scaleCount > h.depth)
    throw CodecError("bitstream header has invalid dimensions");
  h.pointCount = r.uint(8);
  h.blockSize = r.uint(8);
  for (int c = 0; c < h.channels; c++) {
    const double q = r.f64();
    if (!(q > 0) || !std::isfinite(q))
      throw CodecError("bitstream header has invalid quantization step");
    h.qs.push_back(q);
  }

  const uint64_t chunkCount = r.uint(4);
  if (chunkCount > h.pointCount || (h.pointCount > 0 && chunkCount == 0))
    throw CodecError("bitstream header has invalid chunk count");

  const size_t slots = size_t(h.scaleCount) * h.channels;
  uint64_t points = 0;
  for (uint64_t k = 0; k < chunkCount; k++) {
    ChunkHeader ch;
    ch.pointCount = r.uint(8);
    points += ch.pointCount;
    if (ch.pointCount == 0 || points > h.pointCount)
      throw CodecError("bitstream chunk table is inconsistent");

    PackedSource side{r};
    for (int m = 0; m < h.scaleCount; m++) {
      ScaleMode mode;
      mode.predicted = side.get(BinContext::kBypass);
      mode.refined = side.get(BinContext::kBypass);
      if (mode.refined && !mode.predicted)
        throw CodecError("bitstream mode flags are inconsistent");
      ch.modes.push_back(mode);
    }
    for (int c = 0; c < h.channels; c++) {
      const uint64_t mag = readExpGolomb(side);
      int64_t dc = int64_t(mag);
      if (mag != 0 && side.get(BinContext::kBypass))
        dc = -dc;
      ch.rootDc.push_back(dc);
    }
    for (size_t i = 0; i < slots; i++)
      ch.payloadBytes.push_back(uint32_t(r.uint(4)));
    h.chunks.push_back(std::move(ch));
  }
  if (points != h.pointCount)
    throw CodecError("bitstream chunk point counts do not add up");

  const size_t headerEnd = r.pos();
  const uint32_t storedCrc = uint32_t(r.uint(4));
  stream.headerBytes = r.pos();

  uint64_t payloadTotal = 0;
  for (const auto& ch : h.chunks)
    for (uint32_t n : ch.payloadBytes)
      payloadTotal += n;
  if (payloadTotal != r.rest().size())
    throw CodecError("bitstream payload size does not match the directory");

  uint32_t crc = crcUpdate(0, bytes.data(), headerEnd);
  crc = crcUpdate(crc, r.rest().data(), r.rest().size());
  if (crc != storedCrc)
    throw CodecError("bitstream checksum mismatch");

  for (const auto& ch : h.chunks) {
    std::vector<std::vector<uint8_t>> chunk;
    for (uint32_t n : ch.payloadBytes) {
      const uint8_t* p = r.take(n);
      chunk.emplace_back(p, p + n);
    }
    stream.payloads.push_back(std::move(chunk));
  }
  return stream;
}

}  // namespace draht
