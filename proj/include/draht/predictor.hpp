#pragma once

#include <cstdint>
#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "draht/attributes.hpp"
#include "draht/haar.hpp"
#include "draht/neighbors.hpp"
#include "draht/pyramid.hpp"
#include "draht/refiner.hpp"

namespace draht {

//============================================================================

struct PredictionConfig {
  // Highest child scale that is predicted; negative disables prediction.
  // Unset means s - 2.
  std::optional<int> enabledFrom;

  // Compensation refiner, or null for plain IDW.
  std::shared_ptr<const PredictionRefiner> refiner;

  int firstPredictedScale(int scaleCount) const
  {
    return enabledFrom ? std::min(*enabledFrom, scaleCount - 2) : scaleCount - 2;
  }
};

// Per-scale mode bits as carried in the bitstream.
struct ScaleMode {
  bool predicted = false;
  bool refined = false;

  bool operator==(const ScaleMode&) const = default;
};

// Child scales that may use compensation need a grandparent at m + 2 and
// one predicted scale above them.
inline bool
refinerUsable(int childScale, int scaleCount)
{
  return childScale <= scaleCount - 3;
}

//============================================================================
// Tap weights by number of non-zero offset components.
constexpr double kIdwKernel[4] = {4.0, 3.0, 2.0, 1.0};

// Inverse-distance-weighted upsampling in the averaged-attribute domain.
// Every parent value is replicated to its eight child offsets and each
// occupied child takes the 3x3x3 kernel average over occupied taps.
Attributes idwPredict(
  const Attributes& parentAverages,
  const ScaleLevel& parent,
  const ScaleLevel& child,
  const NeighborTable& parentNeighbors);

Attributes idwPredict(
  const Attributes& parentAverages, const ScaleLevel& parent, const ScaleLevel& child);

// IDW(parent) + refiner(parentAverages - parentPrediction).
// parentPrediction is IDW(grandparent averages) evaluated on `parent`.
Attributes compensate(
  const Attributes& parentAverages,
  const Attributes& parentPrediction,
  const Attributes& idwChild,
  const PredictionRefiner& refiner,
  const ScaleLevel& parent,
  const ScaleLevel& child,
  const NeighborTable& parentNeighbors);

// Predicted AC minus actual AC, slot aligned.  childPrediction holds
// predicted averages; the DC of the prediction is discarded.
CoefficientSet predictedCoefficients(
  const Attributes& childPrediction, const ScaleLevel& child, const ScaleLevel& parent);

Attributes formResidual(
  const CoefficientSet& actual, const CoefficientSet& predicted);

double meanSquaredError(const Attributes& a, const Attributes& b);

// Index of the candidate with the lowest MSE; ties go to the lower index.
size_t chooseMode(std::span<const Attributes> candidates, const Attributes& actual);

}  // namespace draht
