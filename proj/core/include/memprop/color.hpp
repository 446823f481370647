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

#include "memprop/image.hpp"
#include "memprop/label_field.hpp"

namespace memprop {

struct Lab {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// sRGB (8-bit, D65) to CIELAB.
Lab srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Maps a in Lab units to [0, 1] with a = 0 at 0.5.
double rescale_a(double a);

/// The a channel of every pixel, rescaled to [0, 1].
LabelField rgb_to_lab_a_channel(const RgbImage& frame);

}  // namespace memprop
