#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace draht {

//============================================================================
// Row-major N x C matrix of real attribute values, one row per node.

class Attributes {
public:
  Attributes() = default;
  Attributes(size_t rows, size_t channels, double fill = 0.0)
    : rows_(rows), channels_(channels), data_(rows * channels, fill)
  {}

  size_t rows() const { return rows_; }
  size_t channels() const { return channels_; }
  bool empty() const { return rows_ == 0; }

  double& operator()(size_t row, size_t ch) { return data_[row * channels_ + ch]; }
  double operator()(size_t row, size_t ch) const
  {
    return data_[row * channels_ + ch];
  }

  std::span<double> row(size_t i) { return {data_.data() + i * channels_, channels_}; }
  std::span<const double> row(size_t i) const
  {
    return {data_.data() + i * channels_, channels_};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Attributes&) const = default;

private:
  size_t rows_ = 0;
  size_t channels_ = 0;
  std::vector<double> data_;
};

}  // namespace draht
