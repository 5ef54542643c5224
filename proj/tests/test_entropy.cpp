#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "draht/error.hpp"
#include "draht/quantizer.hpp"
#include "draht/range_coder.hpp"
#include "draht/rate_proxy.hpp"
#include "draht/residual_coder.hpp"
#include "draht/run_length.hpp"

using namespace draht;

namespace {

std::vector<int64_t>
sparseSequence(std::mt19937_64& rng, size_t n, double density, int64_t spread)
{
  std::vector<int64_t> v(n);
  for (auto& x : v)
    if (double(rng() >> 11) * 0x1p-53 < density) {
      const int64_t mag = 1 + int64_t(rng() % uint64_t(spread));
      x = rng() & 1 ? mag : -mag;
    }
  return v;
}

// Laplace mass of [x - 0.5, x + 0.5], using whichever tail avoids
// cancellation
double
binMass(double x, double mu, double b)
{
  const double lo = x - 0.5, hi = x + 0.5;
  auto below = [&](double t) { return 0.5 * std::exp((t - mu) / b); };   // t <= mu
  auto above = [&](double t) { return 0.5 * std::exp(-(t - mu) / b); };  // t >= mu
  if (lo >= mu)
    return above(lo) - above(hi);
  if (hi <= mu)
    return below(hi) - below(lo);
  return 1 - below(lo) - above(hi);
}

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("quantizer rounds half away from zero")
{
  CHECK(quantize(0.0, 3.0) == 0);
  CHECK(quantize(4.0, 8.0) == 1);
  CHECK(quantize(-4.0, 8.0) == -1);
  CHECK(quantize(3.999, 8.0) == 0);
  CHECK(quantize(-12.0, 8.0) == -2);
  CHECK(dequantize(-3, 2.5) == -7.5);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(-1000, 1000);
  for (double qs : {0.5, 1.0, 8.0, 224.0}) {
    std::vector<double> r(10000);
    for (auto& x : r)
      x = dist(rng);
    const auto back = dequantize(quantize(r, qs), qs);
    double worst = 0;
    for (size_t i = 0; i < r.size(); i++)
      worst = std::max(worst, std::fabs(back[i] - r[i]));
    CHECK(worst <= qs / 2);
  }
  CHECK_THROWS_AS(quantize(1.0, 0.0), CodecError);
  CHECK_THROWS_AS(quantize(1.0, -2.0), CodecError);
  CHECK_THROWS_AS(quantize(NAN, 1.0), CodecError);
  CHECK_THROWS_AS(quantize(1e30, 1e-9), CodecError);
}

TEST_CASE("zero run-length form")
{
  const int64_t A = 5, B = -2, C = 7, D = 1;
  const std::vector<int64_t> seq = {A, 0, 0, 0, B, C, 0, D};
  const auto s = rleEncode(seq);
  const std::vector<RunValue> expect = {{0, A}, {3, B}, {0, C}, {1, D}};
  CHECK(s.entries == expect);
  CHECK(s.trailingZeros == 0);
  CHECK(rleDecode(s, seq.size()) == seq);

  const std::vector<int64_t> zeros(17, 0);
  const auto z = rleEncode(zeros);
  CHECK(z.entries.empty());
  CHECK(z.trailingZeros == 17);
  CHECK(rleDecode(z, 17) == zeros);

  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; t++) {
    const auto v = sparseSequence(rng, 1 + rng() % 2000, 0.05, 100);
    CHECK(rleDecode(rleEncode(v), v.size()) == v);
  }
  CHECK_THROWS_AS(rleDecode(s, seq.size() + 1), CodecError);
  CHECK_THROWS_AS(rleDecode(s, seq.size() - 1), CodecError);
}

TEST_CASE("binarization codewords")
{
  CHECK(expGolombBits(0) == "1");
  CHECK(expGolombBits(1) == "010");
  CHECK(expGolombBits(2) == "011");
  CHECK(expGolombBits(3) == "00100");
  CHECK(expGolombBits(6) == "00111");

  CHECK(runBits(0) == "0");
  CHECK(runBits(1) == "10");
  CHECK(runBits(2) == "110");
  CHECK(runBits(3) == "111" "0" "00");
  CHECK(runBits(10) == "111" "10" "11");
  CHECK(runBits(18) == "111" "1110" "11");
  CHECK(runBits(19) == "111" "1111" "1");
  CHECK(runBits(20) == "111" "1111" "010");

  CHECK(valueBits(1) == "01");
  CHECK(valueBits(-1) == "11");
  CHECK(valueBits(2) == "0010");
  CHECK(valueBits(-4) == "100100");
}

TEST_CASE("codewords decode and are prefix free")
{
  std::vector<std::string> runs, values;
  for (uint64_t r = 0; r <= 1000; r++) {
    runs.push_back(runBits(r));
    BitStringSource src{runs.back()};
    CHECK(readRun(src) == r);
    CHECK(src.pos == runs.back().size());
  }
  for (int64_t v = 1; v <= 1000; v++)
    for (int64_t s : {v, -v}) {
      values.push_back(valueBits(s));
      BitStringSource src{values.back()};
      CHECK(readValue(src) == s);
      CHECK(src.pos == values.back().size());
    }
  for (auto* set : {&runs, &values}) {
    std::sort(set->begin(), set->end());
    for (size_t i = 1; i < set->size(); i++)
      CHECK((*set)[i].compare(0, (*set)[i - 1].size(), (*set)[i - 1]) != 0);
  }
}

TEST_CASE("range coder sanity")
{
  const std::vector<uint8_t> zeros(10000, 0);
  const auto z = encodeBits(zeros);
  CHECK(double(z.size()) < 0.02 * 10000 / 8);
  CHECK(decodeBits(z, zeros.size()) == zeros);

  std::vector<uint8_t> alt(10000);
  for (size_t i = 0; i < alt.size(); i++)
    alt[i] = i & 1;
  const auto a = encodeBits(alt);
  CHECK(a.size() >= 1200);
  CHECK(a.size() <= 1300);
  CHECK(decodeBits(a, alt.size()) == alt);

  std::mt19937_64 rng(5);
  std::vector<uint8_t> skew(50000);
  for (auto& b : skew)
    b = rng() % 10 == 0;
  for (bool adaptive : {true, false}) {
    const auto p = encodeBits(skew, adaptive);
    CHECK(decodeBits(p, skew.size(), adaptive) == skew);
  }

  CHECK(encodeBits({}).empty());
  CHECK(decodeBits({}, 0).empty());
}

TEST_CASE("residual coder roundtrip and errors")
{
  std::mt19937_64 rng(7);
  for (double density : {0.0, 0.001, 0.05, 0.3, 1.0}) {
    auto v = sparseSequence(rng, 20000, density, density > 0.5 ? 100000 : 5);
    if (density == 1.0)
      v.back() = -(int64_t(1) << 59);
    const auto p = encodeResiduals(v);
    CHECK(p.empty() == (density == 0.0));
    CHECK(decodeResiduals(p, v.size()) == v);
  }
  CHECK(encodeResiduals({}).empty());
  CHECK(decodeResiduals({}, 0).empty());
  CHECK(decodeResiduals({}, 5) == std::vector<int64_t>(5, 0));

  const auto v = sparseSequence(rng, 5000, 0.2, 50);
  auto p = encodeResiduals(v);
  p.resize(p.size() / 2);
  CHECK_THROWS_AS(decodeResiduals(p, v.size()), CodecError);

  // corrupted payloads either fail or decode to something else, never crash
  p = encodeResiduals(v);
  for (size_t i = 0; i < p.size(); i += 7) {
    auto bad = p;
    bad[i] ^= 0x5a;
    try {
      (void)decodeResiduals(bad, v.size());
    } catch (const CodecError&) {
    }
  }
}

TEST_CASE("coarser steps never grow the payload much")
{
  const std::vector<double> sweep = {8, 10, 12, 16, 24, 32, 48, 64, 128, 224};
  int violations = 0;
  for (uint64_t seed = 0; seed < 20; seed++) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> mag(1.0 / 15);
    std::vector<double> r(20000);
    for (auto& x : r)
      x = (rng() & 1 ? 1 : -1) * mag(rng);
    size_t last = SIZE_MAX;
    for (double qs : sweep) {
      const size_t bytes = encodeResiduals(quantize(r, qs)).size();
      violations += bytes > last;
      last = bytes;
    }
  }
  CHECK(violations <= 1);
}

TEST_CASE("rate proxy")
{
  const RateProxyParams p;
  const double q0 = 1 - std::exp(-0.5 / 0.2);
  const std::vector<int64_t> zeros(1000, 0);
  CHECK(estimateBits(zeros, p) == doctest::Approx(0.425 * 1000 * -std::log2(q0)).epsilon(1e-12));
  CHECK(estimateBits({}, p) == 0);

  for (int x = -40; x <= 40; x++) {
    const double q = binMass(x, 0, 0.2);
    CHECK(binSelfInformation(x, p) == doctest::Approx(-std::log2(q)).epsilon(1e-9));
  }
  const RateProxyParams shifted{0.5, 0.3, 1.5};
  for (int x = -8; x <= 8; x++) {
    const double q = binMass(x, 0.3, 1.5);
    CHECK(binSelfInformation(x, shifted) == doctest::Approx(-std::log2(q)).epsilon(1e-9));
  }

  for (int64_t x = 0; x < 5000; x++)
    CHECK(binSelfInformation(double(x + 1), p) > binSelfInformation(double(x), p));
  CHECK(std::isfinite(binSelfInformation(1e12, p)));
  CHECK(binSelfInformation(-7, p) == binSelfInformation(7, p));

  std::mt19937_64 rng(3);
  auto v = sparseSequence(rng, 3000, 0.2, 30);
  const double bits = estimateBits(v, p);
  auto shuffled = v;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(estimateBits(shuffled, p) == doctest::Approx(bits).epsilon(1e-12));
  const std::span<const int64_t> all(v);
  CHECK(estimateBits(all.first(1000), p) + estimateBits(all.subspan(1000), p)
        == doctest::Approx(bits).epsilon(1e-12));

  CHECK_THROWS_AS(validate({0.0, 0, 0.2}), CodecError);
  CHECK_THROWS_AS(validate({1.5, 0, 0.2}), CodecError);
  CHECK_THROWS_AS(validate({0.4, 0, 0.0}), CodecError);
  CHECK_NOTHROW(validate({1.0, -2, 3}));
}

}
