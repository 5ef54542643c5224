#include "draht/codec.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "draht/error.hpp"
#include "draht/haar.hpp"
#include "draht/neighbors.hpp"
#include "draht/parallel.hpp"
#include "draht/partition.hpp"
#include "draht/pyramid.hpp"
#include "draht/quantizer.hpp"
#include "draht/residual_coder.hpp"

namespace draht {

namespace {

  //==========================================================================
  // Top-down reconstruction shared by encoder and decoder.  Both sides call
  // the same member functions in the same order, so every prediction and
  // reconstruction is bit-identical.

  class ClosedLoop {
  public:
    ClosedLoop(
      const Pyramid& pyr,
      std::span<const double> qs,
      const PredictionConfig& prediction,
      std::shared_ptr<const PredictionRefiner> refiner)
      : pyr_(pyr)
      , qs_(qs.begin(), qs.end())
      , s_(pyr.scaleCount())
      , firstPredicted_(prediction.firstPredictedScale(pyr.scaleCount()))
      , refiner_(std::move(refiner))
      , recon_(size_t(s_) + 1)
    {}

    int scaleCount() const { return s_; }
    size_t channels() const { return qs_.size(); }

    bool predictionAllowed(int m) const { return m <= firstPredicted_; }
    bool refinerAllowed(int m) const
    {
      return refiner_ && predictionAllowed(m) && refinerUsable(m, s_) && idwCache_;
    }

    //------------------------------------------------------------------------

    void
    setRoot(std::span<const int64_t> quantizedDc)
    {
      const ScaleLevel& top = pyr_[s_];
      Attributes sums(top.size(), channels());
      const double sw = std::sqrt(double(top.weights[0]));
      for (size_t c = 0; c < channels(); c++)
        sums(0, c) = dequantize(quantizedDc[c], qs_[c]) * sw;
      recon_[size_t(s_)] = std::move(sums);
    }

    void
    beginScale(int m)
    {
      m_ = m;
      const ScaleLevel& parent = pyr_[m + 1];
      const ScaleLevel& child = pyr_[m];
      parentAverages_ = averages(recon_[size_t(m + 1)], parent.weights);

      idw_.reset();
      predictedAc_.reset();
      // scale m also feeds compensation of scale m - 1
      if (firstPredicted_ >= 0 && m <= firstPredicted_ + 1) {
        parentNeighbors_ = findNeighbors(parent);
        idw_ = idwPredict(parentAverages_, parent, child, parentNeighbors_);
      }
    }

    const Attributes& idw() const { return *idw_; }

    Attributes
    compensated() const
    {
      return compensate(
        parentAverages_, *idwCache_, *idw_, *refiner_, pyr_[m_ + 1], pyr_[m_],
        parentNeighbors_);
    }

    void
    setPrediction(const Attributes& childAverages)
    {
      predictedAc_ = predictedCoefficients(childAverages, pyr_[m_], pyr_[m_ + 1]);
    }

    const CoefficientSet* predictedAc() const
    {
      return predictedAc_ ? &*predictedAc_ : nullptr;
    }

    size_t acCount() const { return pyr_[m_].size() - pyr_[m_ + 1].size(); }

    //------------------------------------------------------------------------
    // quantized[c][k]: residual of AC slot k, channel c

    void
    finishScale(const std::vector<std::vector<int64_t>>& quantized)
    {
      const ScaleLevel& parent = pyr_[m_ + 1];
      const ScaleLevel& child = pyr_[m_];
      const size_t n = acCount();

      CoefficientSet coeffs;
      coeffs.scale = m_;
      coeffs.dc = normalized(recon_[size_t(m_ + 1)], parent.weights);
      if (predictedAc_) {
        coeffs.ac = predictedAc_->ac;
        coeffs.acLabel = predictedAc_->acLabel;
        coeffs.acBegin = predictedAc_->acBegin;
      } else {
        SlotLayout layout = slotLayout(child, parent);
        coeffs.ac = Attributes(n, channels());
        coeffs.acLabel = std::move(layout.labels);
        coeffs.acBegin = std::move(layout.begin);
      }
      for (size_t c = 0; c < channels(); c++) {
        if (quantized[c].size() != n)
          throw CodecError("residual count does not match the scale layout");
        for (size_t k = 0; k < n; k++)
          coeffs.ac(k, c) = coeffs.ac(k, c) + dequantize(quantized[c][k], qs_[c]);
      }

      Attributes g = inverseScale(coeffs, child, parent);
      for (size_t j = 0; j < child.size(); j++) {
        const double sw = std::sqrt(double(child.weights[j]));
        for (size_t c = 0; c < channels(); c++)
          g(j, c) = g(j, c) * sw;
      }
      recon_[size_t(m_)] = std::move(g);

      idwCache_ = std::move(idw_);
      idw_.reset();
    }

    const Attributes& reconstruction(int m) const { return recon_[size_t(m)]; }
    std::vector<Attributes> takeReconstruction() { return std::move(recon_); }

  private:
    const Pyramid& pyr_;
    std::vector<double> qs_;
    int s_;
    int firstPredicted_;
    std::shared_ptr<const PredictionRefiner> refiner_;

    std::vector<Attributes> recon_;
    int m_ = 0;
    Attributes parentAverages_;
    NeighborTable parentNeighbors_;
    std::optional<Attributes> idw_;
    // IDW of the grandparent evaluated on the current parent scale
    std::optional<Attributes> idwCache_;
    std::optional<CoefficientSet> predictedAc_;
  };

  //==========================================================================

  std::vector<double>
  expandSteps(const std::vector<double>& qs, size_t channels)
  {
    std::vector<double> out;
    if (qs.size() == 1)
      out.assign(channels, qs[0]);
    else if (qs.size() == channels)
      out = qs;
    else
      throw CodecError(
        "expected 1 or " + std::to_string(channels) + " quantization steps, got "
        + std::to_string(qs.size()));
    for (double q : out)
      if (!(q > 0) || !std::isfinite(q))
        throw CodecError("quantization step must be positive");
    return out;
  }

  VoxelizedPointCloud
  extractBlock(const VoxelizedPointCloud& cloud, const std::vector<uint32_t>& idx)
  {
    VoxelizedPointCloud out;
    out.depth = cloud.depth;
    out.channelPeak = cloud.channelPeak;
    out.positions.reserve(idx.size());
    out.attributes = Attributes(idx.size(), cloud.channels());
    for (size_t i = 0; i < idx.size(); i++) {
      out.positions.push_back(cloud.positions[idx[i]]);
      if (cloud.channels() > 0) {
        auto src = cloud.attributes.row(idx[i]);
        std::copy(src.begin(), src.end(), out.attributes.row(i).begin());
      }
    }
    return out;
  }

  //==========================================================================

  struct ChunkResult {
    ChunkHeader header;
    std::vector<std::vector<uint8_t>> payloads;
    std::vector<Attributes> recon;
    std::vector<ScaleStats> scales;
    std::vector<int64_t> residuals;
  };

  ChunkResult
  encodeChunk(
    const VoxelizedPointCloud& block,
    const std::vector<double>& qs,
    const EncoderConfig& config,
    unsigned threads)
  {
    const size_t channels = qs.size();
    const Pyramid pyr = buildPyramid(block, block.depth);
    const int s = pyr.scaleCount();

    ChunkResult out;
    out.header.pointCount = block.size();
    out.header.modes.resize(size_t(s));
    out.payloads.resize(size_t(s) * channels);
    out.scales.resize(size_t(s));

    ClosedLoop loop(pyr, qs, config.prediction, config.prediction.refiner);

    const ScaleLevel& top = pyr[s];
    const double swTop = std::sqrt(double(top.weights[0]));
    for (size_t c = 0; c < channels; c++)
      out.header.rootDc.push_back(quantize(top.sums(0, c) / swTop, qs[c]));
    loop.setRoot(out.header.rootDc);

    for (int m = s - 1; m >= 0; m--) {
      const ScaleLevel& parent = pyr[m + 1];
      const ScaleLevel& child = pyr[m];
      loop.beginScale(m);

      ScaleMode mode;
      if (loop.predictionAllowed(m)) {
        mode.predicted = true;
        if (loop.refinerAllowed(m)) {
          std::vector<Attributes> candidates;
          candidates.push_back(loop.idw());
          candidates.push_back(loop.compensated());
          const Attributes actual = averages(child.sums, child.weights);
          mode.refined = chooseMode(candidates, actual) == 1;
          loop.setPrediction(candidates[mode.refined ? 1 : 0]);
        } else {
          loop.setPrediction(loop.idw());
        }
      }
      out.header.modes[size_t(m)] = mode;

      const CoefficientSet actual =
        forwardScale(child, parent, normalized(child.sums, child.weights));
      const CoefficientSet* predicted = loop.predictedAc();
      const size_t n = actual.acCount();

      std::vector<std::vector<int64_t>> quantized(channels, std::vector<int64_t>(n));
      std::vector<double> proxy(channels);
      parallelFor(channels, threads, [&](size_t c) {
        for (size_t k = 0; k < n; k++) {
          const double r = actual.ac(k, c) - (predicted ? predicted->ac(k, c) : 0.0);
          quantized[c][k] = quantize(r, qs[c]);
        }
        out.payloads[payloadSlot(s, m, channels, c)] = encodeResiduals(quantized[c]);
        proxy[c] = estimateBits(quantized[c], config.proxy);
      });

      ScaleStats& st = out.scales[size_t(m)];
      st.scale = m;
      st.acCount = n;
      st.predictedChunks = mode.predicted;
      st.refinedChunks = mode.refined;
      for (size_t c = 0; c < channels; c++) {
        st.bits.push_back(8 * out.payloads[payloadSlot(s, m, channels, c)].size());
        st.proxyBits.push_back(proxy[c]);
        out.residuals.insert(out.residuals.end(), quantized[c].begin(), quantized[c].end());
      }

      loop.finishScale(quantized);
    }

    out.recon = loop.takeReconstruction();
    return out;
  }

  //--------------------------------------------------------------------------

  std::vector<Attributes>
  decodeChunk(
    const VoxelizedPointCloud& block,
    const BitstreamHeader& header,
    const ChunkHeader& chunk,
    const std::vector<std::vector<uint8_t>>& payloads,
    std::shared_ptr<const PredictionRefiner> refiner,
    unsigned threads)
  {
    const size_t channels = header.channels;
    const Pyramid pyr = buildPyramid(block, header.scaleCount);
    const int s = pyr.scaleCount();
    if (pyr[s].size() != 1)
      throw CodecError("geometry does not reduce to a single root node");

    // the decoder enables prediction exactly where the flags say so
    PredictionConfig prediction;
    int first = -1;
    for (int m = 0; m < s; m++)
      if (chunk.modes[size_t(m)].predicted)
        first = std::max(first, m);
    if (first > s - 2)
      throw CodecError("bitstream predicts a scale without a grandparent");
    for (int m = 0; m <= first; m++)
      if (!chunk.modes[size_t(m)].predicted)
        throw CodecError("bitstream prediction flags are not contiguous");
    prediction.enabledFrom = first;

    ClosedLoop loop(pyr, header.qs, prediction, refiner);
    loop.setRoot(chunk.rootDc);

    for (int m = s - 1; m >= 0; m--) {
      const ScaleMode mode = chunk.modes[size_t(m)];
      loop.beginScale(m);
      if (mode.predicted) {
        if (mode.refined) {
          if (!refiner)
            throw CodecError("bitstream needs a refiner but none was supplied");
          if (!loop.refinerAllowed(m))
            throw CodecError("refined mode flag at a scale without a grandparent");
          loop.setPrediction(loop.compensated());
        } else {
          loop.setPrediction(loop.idw());
        }
      }

      const size_t n = loop.acCount();
      std::vector<std::vector<int64_t>> quantized(channels);
      parallelFor(channels, threads, [&](size_t c) {
        quantized[c] = decodeResiduals(payloads[payloadSlot(s, m, channels, c)], n);
      });
      loop.finishScale(quantized);
    }
    return loop.takeReconstruction();
  }

}  // namespace

//============================================================================

double
EncodeStats::proxyBits() const
{
  double sum = 0;
  for (const auto& s : scales)
    for (double b : s.proxyBits)
      sum += b;
  return sum;
}

//----------------------------------------------------------------------------

EncodeResult
encode(const VoxelizedPointCloud& cloud, const EncoderConfig& config, ReconstructionTrace* trace)
{
  if (cloud.size() == 0)
    throw CodecError("cannot encode an empty point cloud");
  if (cloud.channels() == 0 || cloud.channels() > 255)
    throw CodecError("channel count must be between 1 and 255");
  if (cloud.size() > (size_t(1) << 31))
    throw CodecError("point count exceeds 2^31");
  if (cloud.depth < 1)
    throw CodecError("depth must be at least 1");
  requireCanonical(cloud);
  validate(config.proxy);

  const std::vector<double> qs = expandSteps(config.qs, cloud.channels());
  const auto blocks = partitionBlocks(cloud.positions, config.blockSize);
  const unsigned threads = std::max(1u, config.threads);
  const unsigned outer = blocks.size() > 1 ? threads : 1;
  const unsigned inner = blocks.size() > 1 ? 1 : threads;

  std::vector<ChunkResult> chunks(blocks.size());
  parallelFor(blocks.size(), outer, [&](size_t b) {
    chunks[b] = encodeChunk(extractBlock(cloud, blocks[b]), qs, config, inner);
  });

  Bitstream stream;
  auto& h = stream.header;
  h.channels = uint8_t(cloud.channels());
  h.depth = uint8_t(cloud.depth);
  h.scaleCount = uint8_t(cloud.depth);
  h.pointCount = cloud.size();
  h.blockSize = config.blockSize;
  h.qs = qs;

  EncodeResult result;
  result.reconstruction.depth = cloud.depth;
  result.reconstruction.positions = cloud.positions;
  result.reconstruction.channelPeak = cloud.channelPeak;
  result.reconstruction.attributes = Attributes(cloud.size(), cloud.channels());

  auto& stats = result.stats;
  stats.scales.resize(size_t(cloud.depth));
  for (size_t b = 0; b < blocks.size(); b++) {
    auto& ch = chunks[b];
    h.chunks.push_back(ch.header);
    stream.payloads.push_back(std::move(ch.payloads));

    const Attributes& level0 = ch.recon[0];
    for (size_t i = 0; i < blocks[b].size(); i++) {
      auto src = level0.row(i);
      std::copy(src.begin(), src.end(), result.reconstruction.attributes.row(blocks[b][i]).begin());
    }

    for (size_t m = 0; m < ch.scales.size(); m++) {
      auto& dst = stats.scales[m];
      const auto& src = ch.scales[m];
      dst.scale = int(m);
      dst.acCount += src.acCount;
      dst.predictedChunks += src.predictedChunks;
      dst.refinedChunks += src.refinedChunks;
      dst.bits.resize(qs.size());
      dst.proxyBits.resize(qs.size());
      for (size_t c = 0; c < qs.size(); c++) {
        dst.bits[c] += src.bits[c];
        dst.proxyBits[c] += src.proxyBits[c];
      }
    }
    stats.residuals.insert(stats.residuals.end(), ch.residuals.begin(), ch.residuals.end());
    if (trace)
      trace->chunks.push_back(std::move(ch.recon));
  }

  result.bytes = writeBitstream(stream);
  stats.headerBytes = stream.headerBytes;
  stats.totalBytes = result.bytes.size();
  stats.payloadBytes = stats.totalBytes - stats.headerBytes;
  return result;
}

EncodeResult
encodeVanilla(const VoxelizedPointCloud& cloud, std::vector<double> qs, unsigned threads)
{
  EncoderConfig config;
  config.qs = std::move(qs);
  config.prediction = noPrediction();
  config.threads = threads;
  return encode(cloud, config);
}

//----------------------------------------------------------------------------

VoxelizedPointCloud
decode(
  std::span<const uint8_t> bytes,
  const VoxelizedPointCloud& geometry,
  std::shared_ptr<const PredictionRefiner> refiner,
  unsigned threads,
  ReconstructionTrace* trace)
{
  const Bitstream stream = parseBitstream(bytes);
  const auto& h = stream.header;

  if (geometry.size() != h.pointCount)
    throw CodecError(
      "geometry has " + std::to_string(geometry.size()) + " points, bitstream expects "
      + std::to_string(h.pointCount));
  if (h.scaleCount != h.depth)
    throw CodecError("bitstream scale count must equal its depth");

  VoxelizedPointCloud geo;
  geo.depth = h.depth;
  geo.positions = geometry.positions;
  geo.attributes = Attributes(geometry.size(), 0);
  requireCanonical(geo);

  const auto blocks = partitionBlocks(geo.positions, size_t(h.blockSize));
  if (blocks.size() != h.chunks.size())
    throw CodecError("geometry partition does not match the bitstream chunk table");
  for (size_t b = 0; b < blocks.size(); b++)
    if (blocks[b].size() != h.chunks[b].pointCount)
      throw CodecError("geometry partition does not match the bitstream chunk table");

  threads = std::max(1u, threads);
  const unsigned outer = blocks.size() > 1 ? threads : 1;
  const unsigned inner = blocks.size() > 1 ? 1 : threads;

  std::vector<std::vector<Attributes>> recon(blocks.size());
  parallelFor(blocks.size(), outer, [&](size_t b) {
    VoxelizedPointCloud block = extractBlock(geo, blocks[b]);
    recon[b] = decodeChunk(block, h, h.chunks[b], stream.payloads[b], refiner, inner);
  });

  VoxelizedPointCloud out;
  out.depth = h.depth;
  out.positions = geometry.positions;
  out.channelPeak = geometry.channelPeak.size() == h.channels
    ? geometry.channelPeak
    : std::vector<double>(h.channels, 255.0);
  out.attributes = Attributes(geometry.size(), h.channels);
  for (size_t b = 0; b < blocks.size(); b++) {
    const Attributes& level0 = recon[b][0];
    for (size_t i = 0; i < blocks[b].size(); i++) {
      auto src = level0.row(i);
      std::copy(src.begin(), src.end(), out.attributes.row(blocks[b][i]).begin());
    }
    if (trace)
      trace->chunks.push_back(std::move(recon[b]));
  }
  return out;
}

}  // namespace draht
