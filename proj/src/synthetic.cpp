#include "draht/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <unordered_set>

#include "draht/error.hpp"

namespace draht {

namespace {

  // mt19937_64 is specified bit-exactly; the distributions are not, so
  // values are mapped by hand.
  class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    double uniform() { return double(gen_() >> 11) * 0x1p-53; }
    uint64_t below(uint64_t n) { return gen_() % n; }

  private:
    std::mt19937_64 gen_;
  };

  std::array<double, 3>
  colorAt(const Position& p, const SyntheticSpec& spec, Rng& rng)
  {
    const double extent = double((int64_t(1) << spec.depth) - 1);
    switch (spec.texture) {
    case Texture::kGradient: {
      std::array<double, 3> c;
      for (int k = 0; k < 3; k++)
        c[k] = std::round(255.0 * p[k] / extent);
      return c;
    }
    case Texture::kChecker: {
      const int cell = std::max(1, spec.checkerCell);
      const int parity = (p[0] / cell + p[1] / cell + p[2] / cell) & 1;
      return parity ? std::array<double, 3>{230, 200, 40} : std::array<double, 3>{20, 60, 180};
    }
    case Texture::kNoise:
      return {double(rng.below(256)), double(rng.below(256)), double(rng.below(256))};
    case Texture::kConstant:
      return {128, 64, 200};
    case Texture::kSmooth: {
      std::array<double, 3> c;
      const double u = p[0] / extent, v = p[1] / extent, w = p[2] / extent;
      const double base[3] = {
        128 + 70 * std::sin(2.1 * u + 1.3 * v) + 30 * std::cos(3.7 * w),
        128 + 50 * std::sin(1.7 * v - 2.3 * w + 0.4),
        128 + 55 * std::cos(2.9 * u + 0.8 * w)};
      for (int k = 0; k < 3; k++) {
        const double n = spec.noise * (2 * rng.uniform() - 1);
        c[k] = std::clamp(std::round(base[k] + n), 0.0, 255.0);
      }
      return c;
    }
    }
    return {};
  }

}  // namespace

//============================================================================

Shape
parseShape(const std::string& name)
{
  if (name == "sphere") return Shape::kSphereShell;
  if (name == "plane") return Shape::kPlane;
  if (name == "uniform") return Shape::kUniform;
  throw CodecError("unknown shape '" + name + "'");
}

Texture
parseTexture(const std::string& name)
{
  if (name == "gradient") return Texture::kGradient;
  if (name == "checker") return Texture::kChecker;
  if (name == "noise") return Texture::kNoise;
  if (name == "constant") return Texture::kConstant;
  if (name == "smooth") return Texture::kSmooth;
  throw CodecError("unknown texture '" + name + "'");
}

//----------------------------------------------------------------------------

VoxelizedPointCloud
generateCloud(const SyntheticSpec& spec)
{
  if (spec.depth < 1 || spec.depth > 12)
    throw CodecError("synthetic depth must be between 1 and 12");

  const int32_t size = int32_t(1) << spec.depth;
  Rng rng(spec.seed);
  std::vector<Position> positions;

  auto keep = [&]() { return spec.keep >= 1.0 || rng.uniform() < spec.keep; };

  switch (spec.shape) {
  case Shape::kSphereShell: {
    const double c = 0.5 * (size - 1);
    const double r = spec.radius * size;
    for (int32_t z = 0; z < size; z++)
      for (int32_t y = 0; y < size; y++)
        for (int32_t x = 0; x < size; x++) {
          const double dx = x - c, dy = y - c, dz = z - c;
          const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
          if (std::fabs(d - r) < 0.5 && keep())
            positions.push_back({x, y, z});
        }
    break;
  }
  case Shape::kPlane: {
    // gently tilted height field, one voxel per column
    for (int32_t y = 0; y < size; y++)
      for (int32_t x = 0; x < size; x++) {
        const int32_t z = int32_t(std::floor((x + 2.0 * y) / 6.0 + size / 4.0)) % size;
        if (keep())
          positions.push_back({x, y, z});
      }
    break;
  }
  case Shape::kUniform: {
    const uint64_t cells = uint64_t(size) * size * size;
    const size_t target = std::min<uint64_t>(spec.points, cells);
    std::unordered_set<uint64_t> seen;
    while (positions.size() < target) {
      Position p = {int32_t(rng.below(size)), int32_t(rng.below(size)), int32_t(rng.below(size))};
      if (seen.insert(mortonEncode(p)).second)
        positions.push_back(p);
    }
    break;
  }
  }

  VoxelizedPointCloud cloud;
  cloud.depth = spec.depth;
  cloud.attributes = Attributes(positions.size(), 3);
  cloud.positions = std::move(positions);
  cloud.channelPeak.assign(3, 255.0);
  cloud = canonicalize(std::move(cloud));

  // colors assigned in canonical order so noise does not depend on the
  // traversal above
  cloud.attributes = Attributes(cloud.size(), 3);
  for (size_t i = 0; i < cloud.size(); i++) {
    const auto c = colorAt(cloud.positions[i], spec, rng);
    for (int k = 0; k < 3; k++)
      cloud.attributes(i, k) = c[k];
  }
  return cloud;
}

}  // namespace draht
