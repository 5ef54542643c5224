#include <doctest.h>

#include <map>
#include <set>

#include "draht/error.hpp"
#include "draht/pyramid.hpp"
#include "fixtures.hpp"

using namespace draht;

namespace {

VoxelizedPointCloud
cloudOf(std::vector<Position> positions, int depth, double value)
{
  VoxelizedPointCloud c;
  c.depth = depth;
  c.positions = std::move(positions);
  c.attributes = Attributes(c.positions.size(), 1);
  for (auto& v : c.attributes.data())
    v = value;
  return canonicalize(std::move(c));
}

}  // namespace

TEST_SUITE("pyramid") {

TEST_CASE("full voxel pools to one node")
{
  std::vector<Position> p;
  for (int i = 0; i < 8; i++)
    p.push_back({i & 1, i >> 1 & 1, i >> 2 & 1});
  const auto pyr = buildPyramid(cloudOf(p, 1, 1.0), 1);
  REQUIRE(pyr[1].size() == 1);
  CHECK(pyr[1].sums(0, 0) == 8);
  CHECK(pyr[1].weights[0] == 8);
  CHECK(childrenOf(pyr[1], pyr[0], 0).size() == 8);
}

TEST_CASE("single point forms a chain")
{
  const auto pyr = buildPyramid(cloudOf({{5, 3, 7}}, 3, 10.0), 3);
  CHECK(pyr.scaleCount() == 3);
  for (int m = 0; m <= 3; m++) {
    REQUIRE(pyr[m].size() == 1);
    CHECK(pyr[m].sums(0, 0) == 10);
    CHECK(pyr[m].weights[0] == 1);
  }
  const auto kids = childrenOf(pyr[1], pyr[0], 0);
  REQUIRE(kids.size() == 1);
  CHECK(kids[0].offset == std::array<int, 3>{1, 1, 1});
  CHECK(pyr[1].position(0) == Position{2, 1, 3});
}

TEST_CASE("mass is conserved at every scale")
{
  const auto cloud = testing::randomCloud(21, 4096, 8);
  const auto pyr = buildPyramid(cloud, 8);
  std::vector<double> total(3, 0.0);
  for (size_t i = 0; i < cloud.size(); i++)
    for (size_t c = 0; c < 3; c++)
      total[c] += cloud.attributes(i, c);

  for (int m = 0; m <= 8; m++) {
    int64_t w = 0;
    std::vector<double> a(3, 0.0);
    for (size_t i = 0; i < pyr[m].size(); i++) {
      w += pyr[m].weights[i];
      for (size_t c = 0; c < 3; c++)
        a[c] += pyr[m].sums(i, c);
    }
    CHECK(w == 4096);
    for (size_t c = 0; c < 3; c++)
      CHECK(std::fabs(a[c] - total[c]) <= 1e-9 * total[c]);
  }
  CHECK(pyr[8].size() == 1);
}

TEST_CASE("pooled sums match a direct oracle")
{
  const auto cloud = testing::clusteredCloud(2, 3000, 9);
  const auto pyr = buildPyramid(cloud, 9);
  for (int m = 1; m <= 9; m++) {
    std::map<std::array<int32_t, 3>, std::pair<double, int64_t>> oracle;
    for (size_t i = 0; i < cloud.size(); i++) {
      const auto& p = cloud.positions[i];
      auto& n = oracle[{p[0] >> m, p[1] >> m, p[2] >> m}];
      n.first += cloud.attributes(i, 0);
      n.second++;
    }
    REQUIRE(oracle.size() == pyr[m].size());
    for (size_t i = 0; i < pyr[m].size(); i++) {
      const auto& n = oracle.at(pyr[m].position(i));
      CHECK(pyr[m].weights[i] == n.second);
      CHECK(pyr[m].sums(i, 0) == doctest::Approx(n.first).epsilon(1e-12));
    }
  }
}

TEST_CASE("children partition each level")
{
  const auto cloud = testing::randomCloud(5, 2000, 7);
  const auto pyr = buildPyramid(cloud, 7);
  for (int m = 1; m <= 7; m++) {
    std::set<uint32_t> seen;
    for (size_t j = 0; j < pyr[m].size(); j++) {
      const auto kids = childrenOf(pyr[m], pyr[m - 1], j);
      CHECK(kids.size() >= 1);
      CHECK(kids.size() <= 8);
      const Position pp = pyr[m].position(j);
      for (const auto& k : kids) {
        CHECK(seen.insert(k.index).second);
        CHECK(pyr[m - 1].parent[k.index] == j);
        const Position cp = pyr[m - 1].position(k.index);
        for (int a = 0; a < 3; a++) {
          CHECK(cp[a] / 2 == pp[a]);
          CHECK(cp[a] % 2 == k.offset[a]);
        }
      }
    }
    CHECK(seen.size() == pyr[m - 1].size());
  }
  CHECK_THROWS_AS(childrenOf(pyr[1], pyr[0], pyr[1].size()), CodecError);
}

TEST_CASE("scale count cannot exceed depth")
{
  const auto cloud = testing::randomCloud(1, 10, 4);
  CHECK_THROWS_AS(buildPyramid(cloud, 5), CodecError);
  CHECK(buildPyramid(cloud, 2).scaleCount() == 2);
}

}
