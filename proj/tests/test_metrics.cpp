#include <doctest.h>

#include <cmath>
#include <random>

#include "draht/error.hpp"
#include "draht/metrics.hpp"
#include "fixtures.hpp"

using namespace draht;

namespace {

// Interpolating cubic through four (psnr, log2 rate) points, integrated
// with composite Simpson over the common interval.
double
bdRateOracle(const std::vector<RDPoint>& a, const std::vector<RDPoint>& b)
{
  auto lagrange = [](const std::vector<RDPoint>& pts, double x) {
    double y = 0;
    for (size_t i = 0; i < pts.size(); i++) {
      double l = 1;
      for (size_t j = 0; j < pts.size(); j++)
        if (j != i)
          l *= (x - pts[j].psnr) / (pts[i].psnr - pts[j].psnr);
      y += l * std::log2(pts[i].bpp);
    }
    return y;
  };
  auto range = [](const std::vector<RDPoint>& pts) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& p : pts) {
      lo = std::min(lo, p.psnr);
      hi = std::max(hi, p.psnr);
    }
    return std::pair{lo, hi};
  };
  const double lo = std::max(range(a).first, range(b).first);
  const double hi = std::min(range(a).second, range(b).second);
  const int n = 20000;
  const double h = (hi - lo) / n;
  double s = 0;
  for (int i = 0; i <= n; i++) {
    const double x = lo + i * h;
    const double f = lagrange(b, x) - lagrange(a, x);
    s += f * (i == 0 || i == n ? 1 : i % 2 ? 4 : 2);
  }
  const double avg = s * h / 3 / (hi - lo);
  return (std::exp2(avg) - 1) * 100;
}

VoxelizedPointCloud
withAttributes(const VoxelizedPointCloud& c, const Attributes& a)
{
  auto out = c;
  out.attributes = a;
  return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("psnr closed forms")
{
  const auto cloud = testing::randomCloud(1, 1000, 7);
  const auto same = psnr(cloud, cloud);
  for (double db : same.channelDb)
    CHECK(std::isinf(db));
  CHECK(std::isinf(same.combinedDb));
  CHECK(formatDb(same.combinedDb) == "inf");

  auto shifted = cloud.attributes;
  for (size_t i = 0; i < cloud.size(); i++)
    shifted(i, 1) += 127.5 * (i % 2 ? 1 : -1);
  const auto r = psnr(cloud, withAttributes(cloud, shifted));
  CHECK(r.channelDb[1] == doctest::Approx(10 * std::log10(4.0)).epsilon(1e-12));
  CHECK(std::isinf(r.channelDb[0]));
  CHECK(r.channelMse[1] == doctest::Approx(127.5 * 127.5));
  CHECK(r.combinedDb == doctest::Approx(10 * std::log10(255.0 * 255 / (127.5 * 127.5 / 8))));
}

TEST_CASE("psnr matches a two-pass oracle")
{
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0, 3);
  const auto cloud = testing::randomCloud(2, 3000, 8);
  auto rec = cloud.attributes;
  for (auto& v : rec.data())
    v += noise(rng);
  const auto r = psnr(cloud, withAttributes(cloud, rec));
  double combined = 0;
  for (size_t c = 0; c < 3; c++) {
    double sum = 0;
    for (size_t i = 0; i < cloud.size(); i++)
      sum += std::pow(rec(i, c) - cloud.attributes(i, c), 2);
    const double mse = sum / double(cloud.size());
    combined += (c == 0 ? 6.0 : 1.0) / 8.0 * mse;
    CHECK(std::fabs(r.channelDb[c] - 10 * std::log10(255.0 * 255.0 / mse)) < 1e-9);
  }
  CHECK(std::fabs(r.combinedDb - 10 * std::log10(255.0 * 255.0 / combined)) < 1e-9);

  CHECK_THROWS_AS(psnr(cloud, testing::randomCloud(2, 2999, 8)), CodecError);
}

TEST_CASE("bd-rate")
{
  const std::vector<RDPoint> a = {{0.1, 30}, {0.25, 34}, {0.6, 38}, {1.3, 42}};
  CHECK(std::fabs(bdRate(a, a)) < 1e-9);

  auto half = a;
  for (auto& p : half)
    p.bpp /= 2;
  CHECK(bdRate(a, half) == doctest::Approx(-50).epsilon(1e-9));

  const std::vector<RDPoint> b = {{0.08, 30.5}, {0.2, 34.8}, {0.55, 39.1}, {1.1, 42.6}};
  const double got = bdRate(a, b);
  const double expect = bdRateOracle(a, b);
  CHECK(std::fabs(got - expect) <= 0.001 * std::fabs(expect));

  const std::vector<RDPoint> c = {{0.3, 28}, {0.5, 31}, {0.9, 35.5}, {2.0, 41}};
  CHECK(std::fabs(bdRate(a, c) - bdRateOracle(a, c)) <= 0.001 * std::fabs(bdRateOracle(a, c)));

  CHECK_THROWS_AS(bdRate({a.begin(), a.begin() + 3}, a), CodecError);
  const std::vector<RDPoint> disjoint = {{1, 50}, {2, 52}, {3, 54}, {4, 56}};
  CHECK_THROWS_AS(bdRate(a, disjoint), CodecError);
}

TEST_CASE("csv schema")
{
  CHECK(csvHeader() == "cloud,codec,qs,bpp,psnr_y,psnr_u,psnr_v,psnr_yuv,proxy_bits,actual_bits");
  CsvRow row{"a", "vanilla", 8, 0.5, 40, INFINITY, 41, 42, 10, 12};
  const auto line = csvLine(row);
  CHECK(line.rfind("a,vanilla,8,", 0) == 0);
  CHECK(line.find(",inf,") != std::string::npos);
}

}
