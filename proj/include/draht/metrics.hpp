#pragma once

#include <limits>
#include <string>
#include <vector>

#include "draht/point_cloud.hpp"

namespace draht {

//============================================================================
// Combined PSNR averages per-channel MSE with these weights (Y:U:V = 6:1:1
// by default) and converts with the peak of the first channel.

struct PsnrWeights {
  std::vector<double> weights = {6.0, 1.0, 1.0};
};

struct PsnrReport {
  std::vector<double> channelDb;  // +infinity for an exact reconstruction
  double combinedDb = 0;
  std::vector<double> channelMse;
};

// Throws CodecError when positions or channel counts differ.
PsnrReport psnr(
  const VoxelizedPointCloud& original,
  const VoxelizedPointCloud& reconstructed,
  const PsnrWeights& weights = {});

double psnrFromMse(double mse, double peak);

//----------------------------------------------------------------------------

struct RDPoint {
  double bpp = 0;
  double psnr = 0;
};

// Bjontegaard delta rate of curve b against curve a, in percent.  Log2 rate
// is fitted as a cubic in PSNR (exact for four points, least squares for
// more) and the fits are integrated over the common PSNR interval.
// Throws CodecError with fewer than 4 points or no PSNR overlap.
double bdRate(std::vector<RDPoint> a, std::vector<RDPoint> b);

//----------------------------------------------------------------------------

struct CsvRow {
  std::string cloud;
  std::string codec;
  double qs = 0;
  double bpp = 0;
  double psnrY = 0, psnrU = 0, psnrV = 0, psnrYuv = 0;
  double proxyBits = 0;
  double actualBits = 0;
};

std::string csvHeader();
std::string csvLine(const CsvRow& row);
std::string formatDb(double db);

}  // namespace draht
