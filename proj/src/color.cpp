#include "draht/color.hpp"

#include <string>

#include "draht/error.hpp"

namespace draht {

namespace {

  constexpr double kKr = 0.2126;
  constexpr double kKb = 0.0722;
  constexpr double kKg = 1.0 - kKr - kKb;
  constexpr double kCbScale = 2.0 * (1.0 - kKb);  // 1.8556
  constexpr double kCrScale = 2.0 * (1.0 - kKr);  // 1.5748

  const Matrix3 kForward = {{
    {kKr, kKg, kKb},
    {-kKr / kCbScale, -kKg / kCbScale, (1.0 - kKb) / kCbScale},
    {(1.0 - kKr) / kCrScale, -kKg / kCrScale, -kKb / kCrScale},
  }};

  const Matrix3 kInverse = {{
    {1.0, 0.0, kCrScale},
    {1.0, -kKb * kCbScale / kKg, -kKr * kCrScale / kKg},
    {1.0, kCbScale, 0.0},
  }};

  void
  requireThreeChannels(const VoxelizedPointCloud& cloud)
  {
    if (cloud.channels() != 3)
      throw CodecError(
        "color conversion needs 3 channels, got "
        + std::to_string(cloud.channels()));
  }

}  // namespace

//============================================================================

const Matrix3&
rgbToYuvMatrix()
{
  return kForward;
}

const Matrix3&
yuvToRgbMatrix()
{
  return kInverse;
}

//----------------------------------------------------------------------------

VoxelizedPointCloud
rgbToYuv(VoxelizedPointCloud cloud)
{
  requireThreeChannels(cloud);
  for (size_t i = 0; i < cloud.size(); i++) {
    auto px = cloud.attributes.row(i);
    const double r = px[0], g = px[1], b = px[2];
    px[0] = kForward[0][0] * r + kForward[0][1] * g + kForward[0][2] * b;
    px[1] =
      kForward[1][0] * r + kForward[1][1] * g + kForward[1][2] * b + kChromaOffset;
    px[2] =
      kForward[2][0] * r + kForward[2][1] * g + kForward[2][2] * b + kChromaOffset;
  }
  return cloud;
}

VoxelizedPointCloud
yuvToRgb(VoxelizedPointCloud cloud)
{
  requireThreeChannels(cloud);
  for (size_t i = 0; i < cloud.size(); i++) {
    auto px = cloud.attributes.row(i);
    const double y = px[0];
    const double u = px[1] - kChromaOffset;
    const double v = px[2] - kChromaOffset;
    for (int k = 0; k < 3; k++)
      px[k] = kInverse[k][0] * y + kInverse[k][1] * u + kInverse[k][2] * v;
  }
  return cloud;
}

}  // namespace draht
