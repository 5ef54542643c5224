#pragma once

#include <cstdint>
#include <span>

namespace draht {

// Laplace rate proxy: bits ~= alpha * sum_i -log2 q(x_i), where q(x) is the
// Laplace(mu, sigma) mass of the unit bin around x.  sigma is the Laplace
// scale in quantized-residual units.
struct RateProxyParams {
  double alpha = 0.425;
  double mu = 0.0;
  double sigma = 0.2;
};

// Throws CodecError unless alpha is in (0, 1] and sigma > 0.
void validate(const RateProxyParams& params);

// -log2 of the probability of the unit bin around x, computed in the log
// domain so large magnitudes stay finite.
double binSelfInformation(double x, const RateProxyParams& params);

double estimateBits(std::span<const int64_t> quantized, const RateProxyParams& params = {});

}  // namespace draht
