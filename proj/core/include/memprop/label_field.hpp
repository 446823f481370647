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
#include <string_view>
#include <vector>

#include "memprop/feature_map.hpp"

namespace memprop {

enum class LabelKind { color_a_channel, mask_onehot, keypoint_heatmap };

std::string_view to_string(LabelKind kind);

/// Per-pixel label payload: h x w x d values, channel-last row-major.
///
/// mask_onehot pixels are probability vectors (index 0 is background);
/// keypoint_heatmap channels are non-negative; color_a_channel is a single
/// channel in [0, 1].
class LabelField {
 public:
  LabelField() = default;
  LabelField(int height, int width, int label_dim, LabelKind kind);
  LabelField(int height, int width, int label_dim, LabelKind kind,
             std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int label_dim() const { return label_dim_; }
  int pixels() const { return height_ * width_; }
  LabelKind kind() const { return kind_; }

  double& at(int row, int col, int channel) {
    return data_[index(row, col, channel)];
  }
  double at(int row, int col, int channel) const {
    return data_[index(row, col, channel)];
  }
  std::span<const double> pixel(int row, int col) const {
    return {data_.data() + index(row, col, 0),
            static_cast<std::size_t>(label_dim_)};
  }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  Eigen::Map<const RowMatrix> as_matrix() const {
    return {data_.data(), pixels(), label_dim_};
  }
  Eigen::Map<RowMatrix> as_matrix() { return {data_.data(), pixels(), label_dim_}; }

  bool same_shape(const LabelField& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           label_dim_ == other.label_dim_ && kind_ == other.kind_;
  }

  /// Checks the kind-specific invariants within `tolerance`.
  bool satisfies_invariants(double tolerance = 1e-5) const;

  /// Argmax class per pixel (lowest index on ties).
  std::vector<int> argmax() const;

  friend bool operator==(const LabelField&, const LabelField&) = default;

 private:
  std::size_t index(int row, int col, int channel) const {
    return (static_cast<std::size_t>(row) * width_ + col) * label_dim_ + channel;
  }

  int height_ = 0;
  int width_ = 0;
  int label_dim_ = 0;
  LabelKind kind_ = LabelKind::color_a_channel;
  std::vector<double> data_;
};

/// One-hot encoding of an index image with classes 0..num_classes-1.
LabelField one_hot(std::span<const int> indices, int height, int width,
                   int num_classes);

/// Average-pools `field` over non-overlapping stride x stride blocks
/// (floor division, trailing pixels dropped). Simplex and non-negativity
/// are preserved.
LabelField downsample(const LabelField& field, int stride);

/// Average-pools to exactly height x width using integer strides
/// field.height() / height and field.width() / width.
LabelField downsample_to(const LabelField& field, int height, int width);

/// Bilinear resampling to height x width, treating samples as pixel centers.
LabelField upsample_bilinear(const LabelField& field, int height, int width);

}  // namespace memprop
