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
#include "memprop/image.hpp"

namespace memprop {

struct DescriptorParams {
  int patch_size = 4;
};

constexpr int kBuiltinChannels = 10;

/// Raw patch descriptors at stride patch_size: mean L, a, b; standard
/// deviation of L, a, b; magnitude-weighted histogram of unsigned L-gradient
/// orientation in 4 bins centered at 0, 45, 90 and 135 degrees.
FeatureMap patch_descriptors(const RgbImage& frame, const DescriptorParams& params);

/// Standardizes every channel to zero mean and unit variance over the map.
/// Constant channels become 0.
FeatureMap standardize_channels(const FeatureMap& map);

/// patch_descriptors followed by standardize_channels.
FeatureMap builtin_features(const RgbImage& frame, const DescriptorParams& params);

}  // namespace memprop
