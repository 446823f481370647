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

#include "memprop/image.hpp"
#include "memprop/sequence.hpp"

namespace memprop {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

/// A square of uniform color bouncing inside a uniform background. Every
/// position is a multiple of `step`, so with step equal to the patch size
/// the square stays patch-aligned and exact correspondences exist.
struct TranslatingSquareParams {
  int frames = 20;
  int size = 64;         // frame height and width
  int square = 16;
  int step = 4;          // pixels per frame along each axis
  int start_x = 8;
  int start_y = 20;
  int velocity_x = 1;    // in units of step
  int velocity_y = 1;
  Rgb object{220, 40, 40};
  Rgb background{40, 90, 200};
};

/// Mask sequence (object index 1) with keypoints at the square's corners.
SequenceSource translating_square(const TranslatingSquareParams& params = {});

/// Every frame equals the first: two patch-aligned objects on a uniform
/// background.
SequenceSource static_sequence(int frames = 6, int size = 32);

/// A square moves right by `step` pixels per frame behind a static vertical
/// bar that hides it entirely for `occluded_frames` consecutive frames from
/// `occlusion_start`, then re-emerges. The start position and a per-channel
/// color jitter of up to 24 levels are drawn from `seed`; positions stay
/// multiples of `step`.
struct OcclusionParams {
  int frames = 30;
  int height = 64;
  int width = 160;
  int square = 16;
  int step = 4;
  int occlusion_start = 12;
  int occluded_frames = 5;
  Rgb object{220, 40, 40};
  Rgb background{40, 90, 200};
  Rgb occluder{70, 170, 70};
  std::uint64_t seed = 1;
};

SequenceSource occlusion_sequence(const OcclusionParams& params);

}  // namespace memprop
