#pragma once

#include <cstdint>
#include <string>

#include "draht/point_cloud.hpp"

namespace draht {

enum class Shape { kSphereShell, kPlane, kUniform };
enum class Texture { kGradient, kChecker, kNoise, kConstant, kSmooth };

Shape parseShape(const std::string& name);
Texture parseTexture(const std::string& name);

struct SyntheticSpec {
  Shape shape = Shape::kSphereShell;
  Texture texture = Texture::kGradient;
  int depth = 8;
  // sphere radius as a fraction of the grid size
  double radius = 0.25;
  // fraction of shape voxels kept, drawn with `seed`
  double keep = 1.0;
  // point count for kUniform
  size_t points = 4096;
  int checkerCell = 8;
  // peak amplitude of the uniform noise added by kSmooth
  double noise = 4.0;
  uint64_t seed = 1;
};

// Canonical RGB cloud with integer colors in [0, 255].  Identical specs
// give identical clouds on every platform.
VoxelizedPointCloud generateCloud(const SyntheticSpec& spec);

}  // namespace draht
