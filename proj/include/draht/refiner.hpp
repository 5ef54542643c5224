#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "draht/attributes.hpp"
#include "draht/neighbors.hpp"
#include "draht/pyramid.hpp"

namespace draht {

//============================================================================
// A refiner maps the prediction error of the parent scale to a correction
// of the child-scale prediction.  Implementations must be deterministic.

class PredictionRefiner {
public:
  virtual ~PredictionRefiner() = default;

  // parentError has one row per node of `parent`; the result has one row
  // per node of `child`.
  virtual Attributes correction(
    const Attributes& parentError,
    const ScaleLevel& parent,
    const ScaleLevel& child,
    const NeighborTable& parentNeighbors) const = 0;
};

// Always returns a zero correction.
class NullRefiner final : public PredictionRefiner {
public:
  Attributes correction(
    const Attributes& parentError,
    const ScaleLevel& parent,
    const ScaleLevel& child,
    const NeighborTable& parentNeighbors) const override;
};

//============================================================================
// Inference graph evaluated in file order.  Features start on the parent
// scale and move to the child scale at the single kUpsample layer.
//
//   kLinear        y = W x + b                         W: out x in
//   kRelu          y = max(x, 0)                       in == out, no weights
//   kNeighborConv  y_i = b + sum_k W_k x_{nbr(i, k)}   27 blocks of out x in
//   kUpsample      y_j = W_{octant(j)} x_{parent(j)} + b  8 blocks of out x in

enum class LayerKind : uint8_t { kLinear = 1, kRelu = 2, kNeighborConv = 3, kUpsample = 4 };

struct RefinerLayer {
  LayerKind kind = LayerKind::kLinear;
  uint32_t inputs = 0;
  uint32_t outputs = 0;
  std::vector<double> weight;  // row-major blocks
  std::vector<double> bias;    // outputs entries

  bool operator==(const RefinerLayer&) const = default;
};

size_t weightCount(LayerKind kind, uint32_t inputs, uint32_t outputs);

struct RefinerGraph {
  std::vector<RefinerLayer> layers;

  bool operator==(const RefinerGraph&) const = default;
};

// Throws CodecError unless the graph maps `channels` to `channels` with
// exactly one upsampling layer and consistent shapes.
void validateGraph(const RefinerGraph& graph, size_t channels);

// Weight file: "DRWT", version byte, layer table, little-endian float64
// blobs and a trailing CRC-32.  See docs/refiner_weights.md.
std::vector<uint8_t> serializeGraph(const RefinerGraph& graph);
RefinerGraph parseGraph(std::span<const uint8_t> bytes);

RefinerGraph loadGraph(const std::filesystem::path& path);
void saveGraph(const RefinerGraph& graph, const std::filesystem::path& path);

// Linear -> ReLU -> NeighborConv -> ReLU -> Upsample -> ReLU -> Linear
// with the given hidden width.  scale == 0 yields all-zero weights; any
// other value draws weights uniformly from [-scale, scale] with `seed`.
RefinerGraph defaultTopology(
  size_t channels, uint32_t hidden = 128, double scale = 0.0, uint64_t seed = 0);

//----------------------------------------------------------------------------

class GraphRefiner final : public PredictionRefiner {
public:
  explicit GraphRefiner(RefinerGraph graph);

  Attributes correction(
    const Attributes& parentError,
    const ScaleLevel& parent,
    const ScaleLevel& child,
    const NeighborTable& parentNeighbors) const override;

  const RefinerGraph& graph() const { return graph_; }

private:
  RefinerGraph graph_;
};

}  // namespace draht
