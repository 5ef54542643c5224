#include <doctest.h>

#include <cmath>
#include <random>

#include "draht/error.hpp"
#include "draht/haar.hpp"
#include "draht/pyramid.hpp"
#include "draht/quantizer.hpp"
#include "fixtures.hpp"

using namespace draht;

namespace {

VoxelizedPointCloud
voxelCloud(int pattern, std::mt19937_64& rng, double constant = NAN)
{
  VoxelizedPointCloud c;
  c.depth = 1;
  for (int k = 0; k < 8; k++)
    if (pattern >> k & 1)
      c.positions.push_back({k & 1, k >> 1 & 1, k >> 2 & 1});
  c.attributes = Attributes(c.positions.size(), 2);
  for (auto& v : c.attributes.data())
    v = std::isnan(constant) ? double(rng() % 2000) / 7.0 - 100 : constant;
  return canonicalize(std::move(c));
}

}  // namespace

TEST_SUITE("haar") {

TEST_CASE("butterfly examples")
{
  auto r = butterfly(3.5, 3.5, 1, 1);
  CHECK(r.low == doctest::Approx(3.5 * std::sqrt(2.0)));
  CHECK(std::fabs(r.high) < 1e-15);

  r = butterfly(2, 0, 1, 1);
  CHECK(r.low == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.high == doctest::Approx(-std::sqrt(2.0)));
  CHECK(r.lowWeight == 2);
  CHECK(r.highWeight == 2);

  r = butterfly(5, 123, 3, 0);
  CHECK(r.low == 5);
  CHECK(r.high == 0);
  CHECK(r.lowWeight == 3);
  CHECK(r.highWeight == 0);

  r = butterfly(123, 5, 0, 3);
  CHECK(r.low == 5);
  CHECK(r.highWeight == 0);

  CHECK_THROWS_AS(butterfly(1, 1, 0, 0), CodecError);
}

TEST_CASE("slot count and energy over every occupancy pattern")
{
  std::mt19937_64 rng(1);
  for (int pattern = 1; pattern < 256; pattern++) {
    std::array<int64_t, 8> w{};
    std::array<double, 8> x{};
    double energy = 0;
    int occupied = 0;
    for (int k = 0; k < 8; k++)
      if (pattern >> k & 1) {
        w[k] = 1 + int64_t(rng() % 9);
        x[k] = double(rng() % 1000) - 500;
        energy += x[k] * x[k];
        occupied++;
      }
    VoxelPlan plan(w);
    CHECK(plan.validAcCount() == occupied - 1);
    CHECK(plan.bandWeight[0] > 0);

    auto y = x;
    plan.forward(y.data());
    double out = 0;
    for (int k = 0; k < 8; k++)
      if (plan.bandWeight[k])
        out += y[k] * y[k];
    CHECK(std::fabs(out - energy) <= 1e-9 * std::max(1.0, energy));

    plan.inverse(y.data());
    for (int k = 0; k < 8; k++)
      if (w[k])
        CHECK(std::fabs(y[k] - x[k]) < 1e-9);
  }
}

TEST_CASE("constant full voxel has only DC")
{
  std::mt19937_64 rng(2);
  const auto cloud = voxelCloud(255, rng, 3.0);
  const auto pyr = buildPyramid(cloud, 1);
  const auto coeffs = forwardScale(pyr[0], pyr[1], cloud.attributes);
  CHECK(coeffs.dc(0, 0) == doctest::Approx(3.0 * std::sqrt(8.0)));
  REQUIRE(coeffs.acCount() == 7);
  for (size_t i = 0; i < 7; i++) {
    CHECK(std::fabs(coeffs.ac(i, 0)) < 1e-12);
    CHECK(coeffs.acLabel[i] == FrequencyLabel(i + 1));
  }

  auto dcOnly = coeffs;
  for (auto& v : dcOnly.ac.data())
    v = 0;
  const auto rec = inverseScale(dcOnly, pyr[0], pyr[1]);
  for (double v : rec.data())
    CHECK(v == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("single child passes through")
{
  std::mt19937_64 rng(3);
  const auto cloud = voxelCloud(1 << 5, rng);
  const auto pyr = buildPyramid(cloud, 1);
  const auto coeffs = forwardScale(pyr[0], pyr[1], cloud.attributes);
  CHECK(coeffs.acCount() == 0);
  CHECK(coeffs.dc(0, 0) == cloud.attributes(0, 0));
  CHECK(coeffs.dc(0, 1) == cloud.attributes(0, 1));
}

TEST_CASE("roundtrip and dc equivalence on random voxels")
{
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; trial++) {
    const auto cloud = testing::randomCloud(trial, 1 + rng() % 400, 3 + trial % 4, 2);
    const auto pyr = buildPyramid(cloud, cloud.depth);
    for (int m = 0; m < cloud.depth; m++) {
      const auto g = normalized(pyr[m].sums, pyr[m].weights);
      const auto coeffs = forwardScale(pyr[m], pyr[m + 1], g);
      const auto expectDc = normalized(pyr[m + 1].sums, pyr[m + 1].weights);
      for (size_t i = 0; i < expectDc.data().size(); i++)
        CHECK(std::fabs(coeffs.dc.data()[i] - expectDc.data()[i]) < 1e-9);
      size_t occupiedChildren = 0;
      for (size_t j = 0; j < pyr[m + 1].size(); j++)
        occupiedChildren += pyr[m + 1].childBegin[j + 1] - pyr[m + 1].childBegin[j];
      CHECK(coeffs.acCount() == occupiedChildren - pyr[m + 1].size());
      const auto rec = inverseScale(coeffs, pyr[m], pyr[m + 1]);
      for (size_t i = 0; i < g.data().size(); i++)
        CHECK(std::fabs(rec.data()[i] - g.data()[i]) < 1e-9);
    }
  }
}

TEST_CASE("quantization error energy is preserved by the inverse")
{
  const auto cloud = testing::clusteredCloud(8, 5000, 8);
  const auto pyr = buildPyramid(cloud, 8);
  for (int m = 0; m < 8; m++) {
    const auto g = normalized(pyr[m].sums, pyr[m].weights);
    auto coeffs = forwardScale(pyr[m], pyr[m + 1], g);
    double coefErr = 0;
    for (auto& v : coeffs.ac.data()) {
      const double q = dequantize(quantize(v, 3.0), 3.0);
      coefErr += (q - v) * (q - v);
      v = q;
    }
    const auto rec = inverseScale(coeffs, pyr[m], pyr[m + 1]);
    double recErr = 0;
    for (size_t i = 0; i < g.data().size(); i++)
      recErr += (rec.data()[i] - g.data()[i]) * (rec.data()[i] - g.data()[i]);
    CHECK(std::fabs(recErr - coefErr) <= 1e-6 * coefErr);
  }
}

TEST_CASE("slot layout mismatch is rejected")
{
  const auto cloud = testing::randomCloud(6, 100, 5);
  const auto pyr = buildPyramid(cloud, 5);
  auto coeffs = forwardScale(pyr[0], pyr[1], cloud.attributes);
  coeffs.acLabel.pop_back();
  CHECK_THROWS_AS(inverseScale(coeffs, pyr[0], pyr[1]), CodecError);
  CHECK(labelName(FrequencyLabel::HLH) == "HLH");
}

}
