#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace draht {

// r / qs rounded half away from zero.  Throws CodecError when qs <= 0, the
// input is not finite, or the quotient does not fit the coder range.
int64_t quantize(double r, double qs);
std::vector<int64_t> quantize(std::span<const double> r, double qs);

double dequantize(int64_t q, double qs);
std::vector<double> dequantize(std::span<const int64_t> q, double qs);

// largest magnitude accepted by quantize
constexpr int64_t kMaxQuantized = int64_t(1) << 60;

}  // namespace draht
