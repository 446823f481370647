// Copyright 2026 The memprop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace memprop {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense h x w x c embedding of a frame, channel-last row-major.
///
/// All values are finite; construction validates this.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int height, int width, int channels);  // zero-filled
  FeatureMap(int height, int width, int channels, std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  int pixels() const { return height_ * width_; }
  bool empty() const { return data_.empty(); }

  double& at(int row, int col, int channel) {
    return data_[index(row, col, channel)];
  }
  double at(int row, int col, int channel) const {
    return data_[index(row, col, channel)];
  }

  std::span<double> pixel(int row, int col) {
    return {data_.data() + index(row, col, 0),
            static_cast<std::size_t>(channels_)};
  }
  std::span<const double> pixel(int row, int col) const {
    return {data_.data() + index(row, col, 0),
            static_cast<std::size_t>(channels_)};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// (h*w) x c view, one row per pixel.
  Eigen::Map<const RowMatrix> as_matrix() const {
    return {data_.data(), pixels(), channels_};
  }
  Eigen::Map<RowMatrix> as_matrix() { return {data_.data(), pixels(), channels_}; }

  bool same_shape(const FeatureMap& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }

  /// Throws ValidationError on a NaN/Inf entry.
  void check_finite() const;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  std::size_t index(int row, int col, int channel) const {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_ + channel;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

}  // namespace memprop
