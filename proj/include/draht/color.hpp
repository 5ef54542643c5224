#pragma once

#include <array>

#include "draht/point_cloud.hpp"

namespace draht {

using Matrix3 = std::array<std::array<double, 3>, 3>;

// BT.709 full-range analog transform.  Chroma is offset by 128 so that
// gray maps to U = V = 128; nothing is rounded.
constexpr double kChromaOffset = 128.0;

const Matrix3& rgbToYuvMatrix();
const Matrix3& yuvToRgbMatrix();

VoxelizedPointCloud rgbToYuv(VoxelizedPointCloud cloud);
VoxelizedPointCloud yuvToRgb(VoxelizedPointCloud cloud);

}  // namespace draht
