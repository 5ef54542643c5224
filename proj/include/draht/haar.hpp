#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "draht/attributes.hpp"
#include "draht/pyramid.hpp"

namespace draht {

//============================================================================
// Frequency label of a dyadic sub-band.  Letters are appended in Z, Y, X
// decomposition order, which makes the label value
// (zHigh << 2) | (yHigh << 1) | xHigh.  LLL is the DC band.

enum class FrequencyLabel : uint8_t { LLL, LLH, LHL, LHH, HLL, HLH, HHL, HHH };

std::string labelName(FrequencyLabel label);

//----------------------------------------------------------------------------
// Weighted two-point Haar butterfly.  An empty input passes the other one
// through to the low band and invalidates the high band (highWeight = 0).

struct ButterflyResult {
  double low = 0;
  double high = 0;
  int64_t lowWeight = 0;
  int64_t highWeight = 0;
};

// Throws CodecError when both weights are zero.
ButterflyResult butterfly(double g1, double g2, int64_t w1, int64_t w2);

//============================================================================
// Transform of a single 2x2x2 voxel.  Inputs are indexed by octant
// (x | y << 1 | z << 2); outputs by FrequencyLabel.  An empty octant has
// weight 0 and its input value is ignored.

struct VoxelPlan {
  struct Stage {
    uint8_t lo, hi;
    double a, b;  // sqrt(w1 / (w1 + w2)), sqrt(w2 / (w1 + w2))
    int64_t w1, w2;
  };

  std::array<Stage, 12> stages;
  // weight of each output band; zero marks an invalid slot
  std::array<int64_t, 8> bandWeight;

  explicit VoxelPlan(const std::array<int64_t, 8>& octantWeight);

  int validAcCount() const;
  void forward(double* x, size_t stride = 1) const;
  void inverse(double* x, size_t stride = 1) const;
};

//============================================================================
// DC and valid AC coefficients of one scale transition m -> m + 1.  AC
// slots of each parent are stored in ascending label order, parents in
// Morton order; the layout follows from geometry alone.

struct CoefficientSet {
  int scale = 0;
  Attributes dc;                    // one row per parent node
  Attributes ac;                    // one row per valid AC slot
  std::vector<FrequencyLabel> acLabel;
  std::vector<uint32_t> acBegin;    // per parent, size parents + 1

  size_t acCount() const { return ac.rows(); }
};

struct SlotLayout {
  std::vector<FrequencyLabel> labels;
  std::vector<uint32_t> begin;
};

SlotLayout slotLayout(const ScaleLevel& child, const ScaleLevel& parent);

// g holds normalized attributes A / sqrt(w) of the child level.
CoefficientSet forwardScale(
  const ScaleLevel& child, const ScaleLevel& parent, const Attributes& g);

// Returns normalized child attributes.  Throws CodecError when the
// coefficient layout does not match the geometry.
Attributes inverseScale(
  const CoefficientSet& coeffs, const ScaleLevel& child, const ScaleLevel& parent);

}  // namespace draht
