#include "draht/predictor.hpp"

#include <array>
#include <cmath>
#include <cstdlib>

#include "draht/error.hpp"

namespace draht {

namespace {

  // For a child at octant o, the 27 child-resolution taps fall into at most
  // eight parent voxels.  Each entry is a parent neighbour tap with the
  // summed kernel weight of the child taps it covers.
  struct ParentTap {
    int tap;
    double weight;
  };

  struct OctantTaps {
    std::array<ParentTap, 8> taps;
  };

  std::array<OctantTaps, 8>
  buildOctantTaps()
  {
    std::array<OctantTaps, 8> table;
    for (int o = 0; o < 8; o++) {
      const int off[3] = {o & 1, (o >> 1) & 1, (o >> 2) & 1};
      std::array<double, kNeighborhoodSize> acc{};
      for (int dz = -1; dz <= 1; dz++)
        for (int dy = -1; dy <= 1; dy++)
          for (int dx = -1; dx <= 1; dx++) {
            const int d[3] = {dx, dy, dz};
            int e[3];
            for (int k = 0; k < 3; k++)
              e[k] = (off[k] + d[k]) >> 1;
            const int nz = std::abs(dx) + std::abs(dy) + std::abs(dz);
            acc[tapIndex(e[0], e[1], e[2])] += kIdwKernel[nz];
          }

      int n = 0;
      for (int t = 0; t < kNeighborhoodSize; t++)
        if (acc[t] > 0)
          table[o].taps[n++] = {t, acc[t]};
    }
    return table;
  }

  const std::array<OctantTaps, 8> kOctantTaps = buildOctantTaps();

  void
  requireAdjacent(const ScaleLevel& parent, const ScaleLevel& child)
  {
    if (parent.scale != child.scale + 1 || parent.childBegin.size() != parent.size() + 1
        || child.parent.size() != child.size())
      throw CodecError("prediction: scale mismatch between parent and child levels");
  }

}  // namespace

//============================================================================

Attributes
idwPredict(
  const Attributes& parentAverages,
  const ScaleLevel& parent,
  const ScaleLevel& child,
  const NeighborTable& parentNeighbors)
{
  requireAdjacent(parent, child);
  if (parentAverages.rows() != parent.size())
    throw CodecError("idwPredict: parent attributes do not match the parent level");

  const size_t channels = parentAverages.channels();
  Attributes out(child.size(), channels);
  std::vector<double> acc(channels);

  for (size_t j = 0; j < child.size(); j++) {
    const uint32_t p = child.parent[j];
    const auto& taps = kOctantTaps[child.octant(j)].taps;

    std::fill(acc.begin(), acc.end(), 0.0);
    double wsum = 0;
    for (const ParentTap& t : taps) {
      const int32_t q = parentNeighbors.at(p, t.tap);
      if (q < 0)
        continue;
      wsum += t.weight;
      auto v = parentAverages.row(size_t(q));
      for (size_t c = 0; c < channels; c++)
        acc[c] += t.weight * v[c];
    }
    auto dst = out.row(j);
    for (size_t c = 0; c < channels; c++)
      dst[c] = acc[c] / wsum;
  }
  return out;
}

Attributes
idwPredict(const Attributes& parentAverages, const ScaleLevel& parent, const ScaleLevel& child)
{
  return idwPredict(parentAverages, parent, child, findNeighbors(parent));
}

//----------------------------------------------------------------------------

Attributes
compensate(
  const Attributes& parentAverages,
  const Attributes& parentPrediction,
  const Attributes& idwChild,
  const PredictionRefiner& refiner,
  const ScaleLevel& parent,
  const ScaleLevel& child,
  const NeighborTable& parentNeighbors)
{
  requireAdjacent(parent, child);
  if (parentPrediction.rows() != parent.size() || parentAverages.rows() != parent.size())
    throw CodecError("compensate: missing grandparent-scale prediction");
  if (idwChild.rows() != child.size())
    throw CodecError("compensate: child prediction does not match the child level");

  Attributes error(parent.size(), parentAverages.channels());
  for (size_t i = 0; i < error.data().size(); i++)
    error.data()[i] = parentAverages.data()[i] - parentPrediction.data()[i];

  Attributes corr = refiner.correction(error, parent, child, parentNeighbors);
  if (corr.rows() != child.size() || corr.channels() != idwChild.channels())
    throw CodecError("compensate: refiner output has the wrong shape");

  Attributes out = idwChild;
  for (size_t i = 0; i < out.data().size(); i++)
    out.data()[i] = corr.data()[i] + idwChild.data()[i];
  return out;
}

//============================================================================

CoefficientSet
predictedCoefficients(
  const Attributes& childPrediction, const ScaleLevel& child, const ScaleLevel& parent)
{
  // a' * w / sqrt(w): predicted sums in the normalized domain
  Attributes g(child.size(), childPrediction.channels());
  for (size_t j = 0; j < child.size(); j++) {
    const double w = double(child.weights[j]);
    const double sw = std::sqrt(w);
    for (size_t c = 0; c < g.channels(); c++)
      g(j, c) = childPrediction(j, c) * w / sw;
  }
  return forwardScale(child, parent, g);
}

Attributes
formResidual(const CoefficientSet& actual, const CoefficientSet& predicted)
{
  if (actual.acLabel != predicted.acLabel || actual.ac.channels() != predicted.ac.channels())
    throw CodecError("formResidual: slot layout mismatch");

  Attributes r(actual.ac.rows(), actual.ac.channels());
  for (size_t i = 0; i < r.data().size(); i++)
    r.data()[i] = actual.ac.data()[i] - predicted.ac.data()[i];
  return r;
}

//----------------------------------------------------------------------------

double
meanSquaredError(const Attributes& a, const Attributes& b)
{
  if (a.data().size() != b.data().size())
    throw CodecError("meanSquaredError: shape mismatch");
  if (a.data().empty())
    return 0;
  double sum = 0;
  for (size_t i = 0; i < a.data().size(); i++) {
    const double d = a.data()[i] - b.data()[i];
    sum += d * d;
  }
  return sum / double(a.data().size());
}

size_t
chooseMode(std::span<const Attributes> candidates, const Attributes& actual)
{
  size_t best = 0;
  double bestErr = 0;
  for (size_t k = 0; k < candidates.size(); k++) {
    const double err = meanSquaredError(candidates[k], actual);
    if (k == 0 || err < bestErr) {
      best = k;
      bestErr = err;
    }
  }
  return best;
}

}  // namespace draht
