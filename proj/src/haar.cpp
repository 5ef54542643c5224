#include "draht/haar.hpp"

#include <cmath>
#include <string>

#include "draht/error.hpp"

namespace draht {

namespace {

  // Z pairs first, then Y on the L and H bands, then X on LL, LH, HL, HH.
  // After a stage the lower index holds the low band and the upper index
  // the high band, so octant bits turn into frequency bits in place.
  constexpr uint8_t kPairs[12][2] = {
    {0, 4}, {1, 5}, {2, 6}, {3, 7},
    {0, 2}, {1, 3}, {4, 6}, {5, 7},
    {0, 1}, {2, 3}, {4, 5}, {6, 7},
  };

  std::array<int64_t, 8>
  gatherWeights(const ScaleLevel& child, uint32_t begin, uint32_t end)
  {
    std::array<int64_t, 8> w{};
    for (uint32_t j = begin; j < end; j++)
      w[child.octant(j)] = child.weights[j];
    return w;
  }

}  // namespace

//============================================================================

std::string
labelName(FrequencyLabel label)
{
  const int v = int(label);
  std::string s(3, 'L');
  if (v & 4) s[0] = 'H';
  if (v & 2) s[1] = 'H';
  if (v & 1) s[2] = 'H';
  return s;
}

//----------------------------------------------------------------------------

ButterflyResult
butterfly(double g1, double g2, int64_t w1, int64_t w2)
{
  if (w1 <= 0 && w2 <= 0)
    throw CodecError("butterfly: both inputs are empty");

  ButterflyResult r;
  r.lowWeight = w1 + w2;
  if (w2 <= 0) {
    r.low = g1;
    return r;
  }
  if (w1 <= 0) {
    r.low = g2;
    return r;
  }

  const double sum = double(w1 + w2);
  const double a = std::sqrt(double(w1) / sum);
  const double b = std::sqrt(double(w2) / sum);
  r.low = a * g1 + b * g2;
  r.high = -b * g1 + a * g2;
  r.highWeight = w1 + w2;
  return r;
}

//============================================================================

VoxelPlan::VoxelPlan(const std::array<int64_t, 8>& octantWeight)
{
  std::array<int64_t, 8> w = octantWeight;
  for (int s = 0; s < 12; s++) {
    Stage& st = stages[s];
    st.lo = kPairs[s][0];
    st.hi = kPairs[s][1];
    st.w1 = w[st.lo];
    st.w2 = w[st.hi];
    st.a = st.b = 0;
    if (st.w1 > 0 && st.w2 > 0) {
      const double sum = double(st.w1 + st.w2);
      st.a = std::sqrt(double(st.w1) / sum);
      st.b = std::sqrt(double(st.w2) / sum);
    }
    w[st.lo] = st.w1 + st.w2;
    w[st.hi] = (st.w1 > 0 && st.w2 > 0) ? st.w1 + st.w2 : 0;
  }
  bandWeight = w;
}

int
VoxelPlan::validAcCount() const
{
  int n = 0;
  for (int k = 1; k < 8; k++)
    n += bandWeight[k] > 0;
  return n;
}

//----------------------------------------------------------------------------

void
VoxelPlan::forward(double* x, size_t stride) const
{
  for (const Stage& st : stages) {
    double& lo = x[st.lo * stride];
    double& hi = x[st.hi * stride];
    if (st.w1 > 0 && st.w2 > 0) {
      const double l = st.a * lo + st.b * hi;
      const double h = -st.b * lo + st.a * hi;
      lo = l;
      hi = h;
    } else if (st.w1 > 0) {
      hi = 0;
    } else if (st.w2 > 0) {
      lo = hi;
      hi = 0;
    } else {
      lo = hi = 0;
    }
  }
}

void
VoxelPlan::inverse(double* x, size_t stride) const
{
  for (int s = 11; s >= 0; s--) {
    const Stage& st = stages[s];
    double& lo = x[st.lo * stride];
    double& hi = x[st.hi * stride];
    if (st.w1 > 0 && st.w2 > 0) {
      const double g1 = st.a * lo - st.b * hi;
      const double g2 = st.b * lo + st.a * hi;
      lo = g1;
      hi = g2;
    } else if (st.w1 > 0) {
      hi = 0;
    } else if (st.w2 > 0) {
      hi = lo;
      lo = 0;
    } else {
      lo = hi = 0;
    }
  }
}

//============================================================================

SlotLayout
slotLayout(const ScaleLevel& child, const ScaleLevel& parent)
{
  if (parent.childBegin.size() != parent.size() + 1)
    throw CodecError("slotLayout: levels are not adjacent");

  SlotLayout layout;
  layout.begin.reserve(parent.size() + 1);
  layout.labels.reserve(child.size() - parent.size());
  for (size_t i = 0; i < parent.size(); i++) {
    layout.begin.push_back(uint32_t(layout.labels.size()));
    VoxelPlan plan(gatherWeights(child, parent.childBegin[i], parent.childBegin[i + 1]));
    for (int k = 1; k < 8; k++)
      if (plan.bandWeight[k] > 0)
        layout.labels.push_back(FrequencyLabel(k));
  }
  layout.begin.push_back(uint32_t(layout.labels.size()));
  return layout;
}

//----------------------------------------------------------------------------

CoefficientSet
forwardScale(const ScaleLevel& child, const ScaleLevel& parent, const Attributes& g)
{
  if (parent.childBegin.size() != parent.size() + 1 || g.rows() != child.size()
      || parent.childBegin.back() != child.size())
    throw CodecError("forwardScale: inconsistent parent/child indexing");

  const size_t channels = g.channels();
  CoefficientSet out;
  out.scale = child.scale;
  out.dc = Attributes(parent.size(), channels);
  out.acBegin.reserve(parent.size() + 1);

  std::vector<double> acValues;
  acValues.reserve((child.size() - parent.size()) * channels);
  std::vector<double> buf(8 * channels);

  for (size_t i = 0; i < parent.size(); i++) {
    out.acBegin.push_back(uint32_t(out.acLabel.size()));
    const uint32_t b = parent.childBegin[i], e = parent.childBegin[i + 1];
    VoxelPlan plan(gatherWeights(child, b, e));

    std::fill(buf.begin(), buf.end(), 0.0);
    for (uint32_t j = b; j < e; j++) {
      auto src = g.row(j);
      std::copy(src.begin(), src.end(), buf.begin() + child.octant(j) * channels);
    }
    for (size_t c = 0; c < channels; c++)
      plan.forward(buf.data() + c, channels);

    for (size_t c = 0; c < channels; c++)
      out.dc(i, c) = buf[c];
    for (int k = 1; k < 8; k++) {
      if (plan.bandWeight[k] <= 0)
        continue;
      out.acLabel.push_back(FrequencyLabel(k));
      acValues.insert(
        acValues.end(), buf.begin() + k * channels, buf.begin() + (k + 1) * channels);
    }
  }
  out.acBegin.push_back(uint32_t(out.acLabel.size()));

  out.ac = Attributes(out.acLabel.size(), channels);
  out.ac.data() = std::move(acValues);
  return out;
}

//----------------------------------------------------------------------------

Attributes
inverseScale(const CoefficientSet& coeffs, const ScaleLevel& child, const ScaleLevel& parent)
{
  const size_t channels = coeffs.dc.channels();
  if (coeffs.dc.rows() != parent.size() || coeffs.acBegin.size() != parent.size() + 1
      || parent.childBegin.size() != parent.size() + 1
      || coeffs.ac.rows() != coeffs.acLabel.size()
      || coeffs.acLabel.size() + parent.size() != child.size())
    throw CodecError("inverseScale: coefficient layout does not match geometry");

  Attributes g(child.size(), channels);
  std::vector<double> buf(8 * channels);

  for (size_t i = 0; i < parent.size(); i++) {
    const uint32_t b = parent.childBegin[i], e = parent.childBegin[i + 1];
    VoxelPlan plan(gatherWeights(child, b, e));

    std::fill(buf.begin(), buf.end(), 0.0);
    for (size_t c = 0; c < channels; c++)
      buf[c] = coeffs.dc(i, c);

    uint32_t slot = coeffs.acBegin[i];
    for (int k = 1; k < 8; k++) {
      if (plan.bandWeight[k] <= 0)
        continue;
      if (slot >= coeffs.acBegin[i + 1] || coeffs.acLabel[slot] != FrequencyLabel(k))
        throw CodecError("inverseScale: AC slot count mismatch with occupancy");
      auto src = coeffs.ac.row(slot++);
      std::copy(src.begin(), src.end(), buf.begin() + k * channels);
    }
    if (slot != coeffs.acBegin[i + 1])
      throw CodecError("inverseScale: AC slot count mismatch with occupancy");

    for (size_t c = 0; c < channels; c++)
      plan.inverse(buf.data() + c, channels);

    for (uint32_t j = b; j < e; j++) {
      auto dst = g.row(j);
      const double* src = buf.data() + child.octant(j) * channels;
      std::copy(src, src + channels, dst.begin());
    }
  }
  return g;
}

}  // namespace draht
