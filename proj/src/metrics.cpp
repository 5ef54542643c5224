#include "draht/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "draht/error.hpp"

namespace draht {

//============================================================================

double
psnrFromMse(double mse, double peak)
{
  if (mse <= 0)
    return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

PsnrReport
psnr(
  const VoxelizedPointCloud& original,
  const VoxelizedPointCloud& reconstructed,
  const PsnrWeights& weights)
{
  if (original.positions != reconstructed.positions)
    throw CodecError("psnr: geometry mismatch");
  const size_t channels = original.channels();
  if (channels != reconstructed.channels() || channels == 0)
    throw CodecError("psnr: channel count mismatch");

  const size_t n = original.size();
  PsnrReport rep;
  rep.channelMse.assign(channels, 0.0);
  for (size_t i = 0; i < n; i++)
    for (size_t c = 0; c < channels; c++) {
      const double d = original.attributes(i, c) - reconstructed.attributes(i, c);
      rep.channelMse[c] += d * d;
    }

  auto peakOf = [&](size_t c) {
    return c < original.channelPeak.size() ? original.channelPeak[c] : 255.0;
  };

  double wsum = 0, combined = 0;
  for (size_t c = 0; c < channels; c++) {
    if (n > 0)
      rep.channelMse[c] /= double(n);
    rep.channelDb.push_back(psnrFromMse(rep.channelMse[c], peakOf(c)));
    const double w = c < weights.weights.size() ? weights.weights[c] : 1.0;
    wsum += w;
    combined += w * rep.channelMse[c];
  }
  rep.combinedDb = psnrFromMse(combined / wsum, peakOf(0));
  return rep;
}

//============================================================================

namespace {

  // least-squares cubic via normal equations on centered abscissae
  struct Cubic {
    std::array<double, 4> c{};
    double shift = 0;

    double integral(double x0, double x1) const
    {
      auto prim = [&](double x) {
        const double t = x - shift;
        return c[0] * t + c[1] * t * t / 2 + c[2] * t * t * t / 3
          + c[3] * t * t * t * t / 4;
      };
      return prim(x1) - prim(x0);
    }
  };

  Cubic
  fitCubic(const std::vector<double>& x, const std::vector<double>& y)
  {
    Cubic fit;
    for (double v : x)
      fit.shift += v;
    fit.shift /= double(x.size());

    double a[4][5] = {};
    for (size_t i = 0; i < x.size(); i++) {
      const double t = x[i] - fit.shift;
      double p[4] = {1, t, t * t, t * t * t};
      for (int r = 0; r < 4; r++) {
        for (int c = 0; c < 4; c++)
          a[r][c] += p[r] * p[c];
        a[r][4] += p[r] * y[i];
      }
    }
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < 4; col++) {
      int piv = col;
      for (int r = col + 1; r < 4; r++)
        if (std::fabs(a[r][col]) > std::fabs(a[piv][col]))
          piv = r;
      if (std::fabs(a[piv][col]) < 1e-300)
        throw CodecError("bdRate: degenerate curve");
      for (int c = 0; c < 5; c++)
        std::swap(a[col][c], a[piv][c]);
      for (int r = 0; r < 4; r++) {
        if (r == col)
          continue;
        const double f = a[r][col] / a[col][col];
        for (int c = col; c < 5; c++)
          a[r][c] -= f * a[col][c];
      }
    }
    for (int r = 0; r < 4; r++)
      fit.c[r] = a[r][4] / a[r][r];
    return fit;
  }

}  // namespace

double
bdRate(std::vector<RDPoint> a, std::vector<RDPoint> b)
{
  if (a.size() < 4 || b.size() < 4)
    throw CodecError("bdRate needs at least 4 points per curve");

  auto prep = [](std::vector<RDPoint>& pts, std::vector<double>& q, std::vector<double>& lr) {
    std::sort(pts.begin(), pts.end(), [](const RDPoint& l, const RDPoint& r) {
      return l.bpp < r.bpp;
    });
    for (const auto& p : pts) {
      if (!(p.bpp > 0) || !std::isfinite(p.psnr))
        throw CodecError("bdRate needs positive rates and finite PSNR");
      q.push_back(p.psnr);
      lr.push_back(std::log2(p.bpp));
    }
  };
  std::vector<double> qa, la, qb, lb;
  prep(a, qa, la);
  prep(b, qb, lb);

  const double lo = std::max(*std::min_element(qa.begin(), qa.end()),
                             *std::min_element(qb.begin(), qb.end()));
  const double hi = std::min(*std::max_element(qa.begin(), qa.end()),
                             *std::max_element(qb.begin(), qb.end()));
  if (!(hi > lo))
    throw CodecError("bdRate: curves do not overlap in PSNR");

  const Cubic fa = fitCubic(qa, la);
  const Cubic fb = fitCubic(qb, lb);
  const double avgDiff = (fb.integral(lo, hi) - fa.integral(lo, hi)) / (hi - lo);
  return (std::exp2(avgDiff) - 1.0) * 100.0;
}

//============================================================================

std::string
formatDb(double db)
{
  if (std::isinf(db))
    return db > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", db);
  return buf;
}

std::string
csvHeader()
{
  return "cloud,codec,qs,bpp,psnr_y,psnr_u,psnr_v,psnr_yuv,proxy_bits,actual_bits";
}

std::string
csvLine(const CsvRow& row)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, "%g,%.8f,", row.qs, row.bpp);
  std::string line = row.cloud + "," + row.codec + "," + buf;
  line += formatDb(row.psnrY) + "," + formatDb(row.psnrU) + "," + formatDb(row.psnrV)
    + "," + formatDb(row.psnrYuv) + ",";
  std::snprintf(buf, sizeof buf, "%.3f,%.0f", row.proxyBits, row.actualBits);
  return line + buf;
}

}  // namespace draht
