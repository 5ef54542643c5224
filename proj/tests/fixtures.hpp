#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "draht/point_cloud.hpp"
#include "draht/synthetic.hpp"

namespace draht::testing {

// n distinct random voxels in a 2^depth grid with uniform attributes in
// [0, 255) (rounded when `integer`).
inline VoxelizedPointCloud
randomCloud(uint64_t seed, size_t n, int depth, size_t channels = 3, bool integer = false)
{
  std::mt19937_64 rng(seed);
  const uint64_t size = uint64_t(1) << depth;
  std::unordered_set<uint64_t> seen;
  VoxelizedPointCloud cloud;
  cloud.depth = depth;
  while (cloud.positions.size() < n) {
    Position p = {int32_t(rng() % size), int32_t(rng() % size), int32_t(rng() % size)};
    if (seen.insert(mortonEncode(p)).second)
      cloud.positions.push_back(p);
  }
  cloud.attributes = Attributes(n, channels);
  for (auto& v : cloud.attributes.data()) {
    v = double(rng() >> 11) * 0x1p-53 * 255.0;
    if (integer)
      v = std::floor(v);
  }
  cloud.channelPeak.assign(channels, 255.0);
  return canonicalize(std::move(cloud));
}

// Clustered random cloud: points drawn around a few seeds so that the
// octree has both dense and sparse regions.
inline VoxelizedPointCloud
clusteredCloud(uint64_t seed, size_t n, int depth, size_t channels = 3)
{
  std::mt19937_64 rng(seed);
  const int32_t size = int32_t(1) << depth;
  std::normal_distribution<double> spread(0.0, size / 16.0);
  std::vector<Position> centers;
  for (int k = 0; k < 6; k++)
    centers.push_back({int32_t(rng() % size), int32_t(rng() % size), int32_t(rng() % size)});
  std::unordered_set<uint64_t> seen;
  VoxelizedPointCloud cloud;
  cloud.depth = depth;
  while (cloud.positions.size() < n) {
    const Position& c = centers[rng() % centers.size()];
    Position p;
    for (int a = 0; a < 3; a++)
      p[a] = std::clamp(int32_t(std::lround(c[a] + spread(rng))), 0, size - 1);
    if (seen.insert(mortonEncode(p)).second)
      cloud.positions.push_back(p);
  }
  cloud.attributes = Attributes(n, channels);
  for (size_t i = 0; i < n; i++)
    for (size_t c = 0; c < channels; c++)
      cloud.attributes(i, c) = 128 + 100 * std::sin(0.05 * cloud.positions[i][c % 3] + double(c))
                               + double(rng() % 9) - 4.0;
  cloud.channelPeak.assign(channels, 255.0);
  return canonicalize(std::move(cloud));
}

// Smooth-textured synthetic fixtures shared by the rate tests.
inline std::vector<SyntheticSpec>
rateFixtures()
{
  std::vector<SyntheticSpec> specs(5);
  specs[0] = {Shape::kSphereShell, Texture::kSmooth, 8, 0.25, 1.0, 0, 8, 4.0, 1};
  specs[1] = {Shape::kPlane, Texture::kSmooth, 8, 0.25, 1.0, 0, 8, 4.0, 2};
  specs[2] = {Shape::kSphereShell, Texture::kSmooth, 8, 0.4, 0.7, 0, 8, 8.0, 3};
  specs[3] = {Shape::kPlane, Texture::kSmooth, 8, 0.25, 1.0, 0, 8, 12.0, 4};
  specs[4] = {Shape::kSphereShell, Texture::kSmooth, 8, 0.3, 1.0, 0, 8, 2.0, 5};
  return specs;
}

}  // namespace draht::testing
