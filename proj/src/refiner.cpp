#include "draht/refiner.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <random>
#include <string>

#include "draht/error.hpp"

namespace draht {

namespace {

  constexpr char kMagic[4] = {'D', 'R', 'W', 'T'};
  constexpr uint8_t kVersion = 1;

  //--------------------------------------------------------------------------

  class ByteWriter {
  public:
    void bytes(const void* p, size_t n)
    {
      auto* b = static_cast<const uint8_t*>(p);
      out_.insert(out_.end(), b, b + n);
    }
    void u8(uint8_t v) { out_.push_back(v); }
    void u32(uint32_t v)
    {
      for (int i = 0; i < 4; i++)
        out_.push_back(uint8_t(v >> (8 * i)));
    }
    void f64(double v)
    {
      uint64_t bits = std::bit_cast<uint64_t>(v);
      for (int i = 0; i < 8; i++)
        out_.push_back(uint8_t(bits >> (8 * i)));
    }
    std::vector<uint8_t>& data() { return out_; }

  private:
    std::vector<uint8_t> out_;
  };

  class ByteReader {
  public:
    explicit ByteReader(std::span<const uint8_t> in) : in_(in) {}

    const uint8_t* take(size_t n)
    {
      if (pos_ + n > in_.size())
        throw CodecError("refiner weights: truncated file");
      const uint8_t* p = in_.data() + pos_;
      pos_ += n;
      return p;
    }
    uint8_t u8() { return *take(1); }
    uint32_t u32()
    {
      const uint8_t* p = take(4);
      return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16
        | uint32_t(p[3]) << 24;
    }
    double f64()
    {
      const uint8_t* p = take(8);
      uint64_t bits = 0;
      for (int i = 0; i < 8; i++)
        bits |= uint64_t(p[i]) << (8 * i);
      return std::bit_cast<double>(bits);
    }
    size_t remaining() const { return in_.size() - pos_; }

  private:
    std::span<const uint8_t> in_;
    size_t pos_ = 0;
  };

  uint32_t
  crc32Of(const uint8_t* p, size_t n)
  {
    return uint32_t(::crc32(::crc32(0L, Z_NULL, 0), p, uInt(n)));
  }

  //--------------------------------------------------------------------------

  void
  affine(
    const double* w, const double* x, size_t inputs, size_t outputs, double* y)
  {
    for (size_t o = 0; o < outputs; o++) {
      const double* row = w + o * inputs;
      double acc = 0;
      for (size_t i = 0; i < inputs; i++)
        acc += row[i] * x[i];
      y[o] += acc;
    }
  }

  Attributes
  withBias(size_t rows, const std::vector<double>& bias)
  {
    Attributes out(rows, bias.size());
    for (size_t r = 0; r < rows; r++)
      std::copy(bias.begin(), bias.end(), out.row(r).begin());
    return out;
  }

}  // namespace

//============================================================================

size_t
weightCount(LayerKind kind, uint32_t inputs, uint32_t outputs)
{
  const size_t block = size_t(inputs) * outputs;
  switch (kind) {
  case LayerKind::kLinear: return block;
  case LayerKind::kRelu: return 0;
  case LayerKind::kNeighborConv: return block * kNeighborhoodSize;
  case LayerKind::kUpsample: return block * 8;
  }
  return 0;
}

void
validateGraph(const RefinerGraph& graph, size_t channels)
{
  if (graph.layers.empty())
    throw CodecError("refiner graph has no layers");

  size_t width = channels;
  int upsamples = 0;
  for (size_t i = 0; i < graph.layers.size(); i++) {
    const auto& l = graph.layers[i];
    const std::string where = "refiner layer " + std::to_string(i);
    if (l.kind != LayerKind::kLinear && l.kind != LayerKind::kRelu
        && l.kind != LayerKind::kNeighborConv && l.kind != LayerKind::kUpsample)
      throw CodecError(where + ": unknown layer kind");
    if (l.inputs != width)
      throw CodecError(where + ": input width does not match previous layer");
    if (l.kind == LayerKind::kRelu && l.outputs != l.inputs)
      throw CodecError(where + ": ReLU must preserve width");
    if (l.weight.size() != weightCount(l.kind, l.inputs, l.outputs))
      throw CodecError(where + ": weight blob has the wrong size");
    if (l.bias.size() != (l.kind == LayerKind::kRelu ? 0 : l.outputs))
      throw CodecError(where + ": bias has the wrong size");
    upsamples += l.kind == LayerKind::kUpsample;
    width = l.outputs;
  }
  if (upsamples != 1)
    throw CodecError("refiner graph needs exactly one upsampling layer");
  if (width != channels)
    throw CodecError("refiner graph output width does not match channel count");
}

//============================================================================
// Layout (little endian):
//   "DRWT" u8:version u32:layerCount
//   per layer: u8:kind u32:inputs u32:outputs f64[weights] f64[bias]
//   u32:crc32 of all preceding bytes

std::vector<uint8_t>
serializeGraph(const RefinerGraph& graph)
{
  ByteWriter w;
  w.bytes(kMagic, 4);
  w.u8(kVersion);
  w.u32(uint32_t(graph.layers.size()));
  for (const auto& l : graph.layers) {
    w.u8(uint8_t(l.kind));
    w.u32(l.inputs);
    w.u32(l.outputs);
    for (double v : l.weight)
      w.f64(v);
    for (double v : l.bias)
      w.f64(v);
  }
  w.u32(crc32Of(w.data().data(), w.data().size()));
  return std::move(w.data());
}

RefinerGraph
parseGraph(std::span<const uint8_t> bytes)
{
  if (bytes.size() < 4 + 1 + 4 + 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw CodecError("refiner weights: bad magic");

  const size_t body = bytes.size() - 4;
  ByteReader crcReader(bytes.subspan(body));
  if (crcReader.u32() != crc32Of(bytes.data(), body))
    throw CodecError("refiner weights: checksum mismatch");

  ByteReader r(bytes.first(body));
  r.take(4);
  if (r.u8() != kVersion)
    throw CodecError("refiner weights: unsupported version");

  RefinerGraph graph;
  const uint32_t count = r.u32();
  for (uint32_t i = 0; i < count; i++) {
    RefinerLayer l;
    l.kind = LayerKind(r.u8());
    l.inputs = r.u32();
    l.outputs = r.u32();
    const size_t nw = weightCount(l.kind, l.inputs, l.outputs);
    const size_t nb = l.kind == LayerKind::kRelu ? 0 : l.outputs;
    if ((nw + nb) * 8 > r.remaining())
      throw CodecError("refiner weights: truncated layer blob");
    l.weight.resize(nw);
    for (auto& v : l.weight)
      v = r.f64();
    l.bias.resize(nb);
    for (auto& v : l.bias)
      v = r.f64();
    graph.layers.push_back(std::move(l));
  }
  if (r.remaining() != 0)
    throw CodecError("refiner weights: trailing bytes");
  return graph;
}

RefinerGraph
loadGraph(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open refiner weights '" + path.string() + "'");
  std::vector<uint8_t> buf(
    (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parseGraph(buf);
}

void
saveGraph(const RefinerGraph& graph, const std::filesystem::path& path)
{
  auto bytes = serializeGraph(graph);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out)
    throw IoError("cannot write refiner weights '" + path.string() + "'");
}

//----------------------------------------------------------------------------

RefinerGraph
defaultTopology(size_t channels, uint32_t hidden, double scale, uint64_t seed)
{
  std::mt19937_64 rng(seed);
  auto draw = [&]() {
    if (scale == 0)
      return 0.0;
    const double u = double(rng() >> 11) * 0x1p-53;
    return scale * (2.0 * u - 1.0);
  };
  auto layer = [&](LayerKind kind, uint32_t in, uint32_t out) {
    RefinerLayer l;
    l.kind = kind;
    l.inputs = in;
    l.outputs = out;
    l.weight.resize(weightCount(kind, in, out));
    for (auto& v : l.weight)
      v = draw();
    l.bias.resize(kind == LayerKind::kRelu ? 0 : out);
    for (auto& v : l.bias)
      v = draw();
    return l;
  };

  const uint32_t c = uint32_t(channels);
  RefinerGraph g;
  g.layers.push_back(layer(LayerKind::kLinear, c, hidden));
  g.layers.push_back(layer(LayerKind::kRelu, hidden, hidden));
  g.layers.push_back(layer(LayerKind::kNeighborConv, hidden, hidden));
  g.layers.push_back(layer(LayerKind::kRelu, hidden, hidden));
  g.layers.push_back(layer(LayerKind::kUpsample, hidden, hidden));
  g.layers.push_back(layer(LayerKind::kRelu, hidden, hidden));
  g.layers.push_back(layer(LayerKind::kLinear, hidden, c));
  return g;
}

//============================================================================

Attributes
NullRefiner::correction(
  const Attributes& parentError,
  const ScaleLevel&,
  const ScaleLevel& child,
  const NeighborTable&) const
{
  return Attributes(child.size(), parentError.channels());
}

//----------------------------------------------------------------------------

GraphRefiner::GraphRefiner(RefinerGraph graph) : graph_(std::move(graph))
{
  if (graph_.layers.empty())
    throw CodecError("refiner graph has no layers");
  validateGraph(graph_, graph_.layers.front().inputs);
}

Attributes
GraphRefiner::correction(
  const Attributes& parentError,
  const ScaleLevel& parent,
  const ScaleLevel& child,
  const NeighborTable& parentNeighbors) const
{
  validateGraph(graph_, parentError.channels());
  if (parentError.rows() != parent.size() || child.parent.size() != child.size())
    throw CodecError("refiner: input does not match the parent level");

  Attributes x = parentError;
  bool onChild = false;
  NeighborTable childNeighbors;
  bool haveChildNeighbors = false;

  for (const auto& l : graph_.layers) {
    const size_t in = l.inputs, out = l.outputs;
    switch (l.kind) {
    case LayerKind::kRelu:
      for (auto& v : x.data())
        v = v > 0 ? v : 0.0;
      break;

    case LayerKind::kLinear: {
      Attributes y = withBias(x.rows(), l.bias);
      for (size_t r = 0; r < x.rows(); r++)
        affine(l.weight.data(), x.row(r).data(), in, out, y.row(r).data());
      x = std::move(y);
      break;
    }

    case LayerKind::kNeighborConv: {
      if (onChild && !haveChildNeighbors) {
        childNeighbors = findNeighbors(child);
        haveChildNeighbors = true;
      }
      const NeighborTable& nbrs = onChild ? childNeighbors : parentNeighbors;
      Attributes y = withBias(x.rows(), l.bias);
      for (size_t r = 0; r < x.rows(); r++) {
        for (int k = 0; k < kNeighborhoodSize; k++) {
          const int32_t q = nbrs.at(r, k);
          if (q < 0)
            continue;
          affine(
            l.weight.data() + size_t(k) * in * out, x.row(size_t(q)).data(), in, out,
            y.row(r).data());
        }
      }
      x = std::move(y);
      break;
    }

    case LayerKind::kUpsample: {
      Attributes y = withBias(child.size(), l.bias);
      for (size_t j = 0; j < child.size(); j++)
        affine(
          l.weight.data() + size_t(child.octant(j)) * in * out,
          x.row(child.parent[j]).data(), in, out, y.row(j).data());
      x = std::move(y);
      onChild = true;
      break;
    }
    }
  }
  return x;
}

}  // namespace draht
