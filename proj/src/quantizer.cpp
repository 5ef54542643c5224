#include "draht/quantizer.hpp"

#include <cmath>
#include <string>

#include "draht/error.hpp"

namespace draht {

int64_t
quantize(double r, double qs)
{
  if (!(qs > 0) || !std::isfinite(qs))
    throw CodecError("quantization step must be positive, got " + std::to_string(qs));
  if (!std::isfinite(r))
    throw CodecError("quantize: non-finite residual");
  const double x = r / qs;
  if (std::fabs(x) >= double(kMaxQuantized))
    throw CodecError("quantize: residual too large for the quantization step");
  // llround rounds halfway cases away from zero
  return int64_t(std::llround(x));
}

std::vector<int64_t>
quantize(std::span<const double> r, double qs)
{
  std::vector<int64_t> out(r.size());
  for (size_t i = 0; i < r.size(); i++)
    out[i] = quantize(r[i], qs);
  return out;
}

double
dequantize(int64_t q, double qs)
{
  return double(q) * qs;
}

std::vector<double>
dequantize(std::span<const int64_t> q, double qs)
{
  std::vector<double> out(q.size());
  for (size_t i = 0; i < q.size(); i++)
    out[i] = dequantize(q[i], qs);
  return out;
}

}  // namespace draht
