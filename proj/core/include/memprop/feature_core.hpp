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

#include "memprop/feature_map.hpp"

namespace memprop {

/// A location as a fraction of the frame extent, both axes in [0, 1].
struct NormalizedPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const NormalizedPoint&, const NormalizedPoint&) = default;
};

struct BlurParams {
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  int radius = 3;

  /// sigma = 0.05 * min(h, w) on both axes, radius = ceil(3 sigma).
  static BlurParams for_extent(int height, int width);

  void validate() const;
};

/// Convolves every channel with the normalized, discretized 2-D Gaussian.
/// Borders use reflect-101 padding, so any kernel radius is valid.
FeatureMap gaussian_blur_2d(const FeatureMap& map, const BlurParams& params);

/// Spatial argmax of the channel-summed blurred map. x = col / (w - 1),
/// y = row / (h - 1); a unit axis maps to 0. Ties go to the lowest row,
/// then the lowest column.
NormalizedPoint peak_location(const FeatureMap& map, const BlurParams& params);

double normalized_distance(const NormalizedPoint& a, const NormalizedPoint& b);

/// Index into [0, n) for an arbitrary offset using reflect-101 mirroring.
int reflect_index(int i, int n);

}  // namespace memprop
