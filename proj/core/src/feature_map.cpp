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

#include "memprop/feature_map.hpp"

#include <cmath>
#include <string>

#include "memprop/errors.hpp"

namespace memprop {

FeatureMap::FeatureMap(int height, int width, int channels)
    : FeatureMap(height, width, channels,
                 std::vector<double>(static_cast<std::size_t>(std::max(height, 0)) *
                                         std::max(width, 0) * std::max(channels, 0),
                                     0.0)) {}

FeatureMap::FeatureMap(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  if (height < 1 || width < 1 || channels < 1) {
    throw ValidationError("feature map dimensions must be positive, got " +
                          std::to_string(height) + "x" + std::to_string(width) +
                          "x" + std::to_string(channels));
  }
  if (data_.size() != static_cast<std::size_t>(height) * width * channels) {
    throw ValidationError("feature map data length " + std::to_string(data_.size()) +
                          " does not match its dimensions");
  }
  check_finite();
}

void FeatureMap::check_finite() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw ValidationError("feature map has a non-finite value at offset " +
                            std::to_string(i));
    }
  }
}

}  // namespace memprop
