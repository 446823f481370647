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

#include <cstdint>
#include <span>
#include <vector>

namespace memprop {

/// 8-bit interleaved RGB image.
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;  // 3 * height * width

  RgbImage() = default;
  RgbImage(int h, int w) : height(h), width(w), data(3 * h * w, 0) {}

  std::uint8_t* pixel(int row, int col) { return &data[3 * (row * width + col)]; }
  const std::uint8_t* pixel(int row, int col) const {
    return &data[3 * (row * width + col)];
  }
  bool valid() const {
    return height > 0 && width > 0 &&
           data.size() == static_cast<std::size_t>(3) * height * width;
  }
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Per-pixel class indices (0 = background), as stored in palette PNGs.
struct IndexMask {
  int height = 0;
  int width = 0;
  std::vector<int> data;

  IndexMask() = default;
  IndexMask(int h, int w) : height(h), width(w), data(h * w, 0) {}

  int& at(int row, int col) { return data[row * width + col]; }
  int at(int row, int col) const { return data[row * width + col]; }
  int max_index() const;
  friend bool operator==(const IndexMask&, const IndexMask&) = default;
};

}  // namespace memprop
