#include "draht/rate_proxy.hpp"

#include <cmath>
#include <numbers>

#include "draht/error.hpp"

namespace draht {

void
validate(const RateProxyParams& params)
{
  if (!(params.alpha > 0 && params.alpha <= 1))
    throw CodecError("rate proxy alpha must lie in (0, 1]");
  if (!(params.sigma > 0))
    throw CodecError("rate proxy sigma must be positive");
}

//----------------------------------------------------------------------------

double
binSelfInformation(double x, const RateProxyParams& params)
{
  const double lo = x - 0.5 - params.mu;
  const double hi = x + 0.5 - params.mu;
  const double s = params.sigma;

  double lnq;
  if (lo >= 0) {
    // 0.5 e^{-lo/s} (1 - e^{-(hi-lo)/s})
    lnq = std::log(0.5) - lo / s + std::log1p(-std::exp(-(hi - lo) / s));
  } else if (hi <= 0) {
    lnq = std::log(0.5) + hi / s + std::log1p(-std::exp(-(hi - lo) / s));
  } else {
    lnq = std::log1p(-0.5 * std::exp(lo / s) - 0.5 * std::exp(-hi / s));
  }
  return -lnq / std::numbers::ln2;
}

double
estimateBits(std::span<const int64_t> quantized, const RateProxyParams& params)
{
  validate(params);
  double bits = 0;
  for (int64_t v : quantized)
    bits += binSelfInformation(double(v), params);
  return params.alpha * bits;
}

}  // namespace draht
