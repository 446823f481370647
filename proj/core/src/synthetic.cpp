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

#include "memprop/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "memprop/errors.hpp"

namespace memprop {

namespace {

std::string frame_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05d", index);
  return buf;
}

void fill(RgbImage& image, int y0, int x0, int h, int w, Rgb color) {
  for (int r = std::max(0, y0); r < std::min(image.height, y0 + h); ++r) {
    for (int c = std::max(0, x0); c < std::min(image.width, x0 + w); ++c) {
      std::uint8_t* p = image.pixel(r, c);
      p[0] = color.r;
      p[1] = color.g;
      p[2] = color.b;
    }
  }
}

void fill(IndexMask& mask, int y0, int x0, int h, int w, int value) {
  for (int r = std::max(0, y0); r < std::min(mask.height, y0 + h); ++r) {
    for (int c = std::max(0, x0); c < std::min(mask.width, x0 + w); ++c) {
      mask.at(r, c) = value;
    }
  }
}

// Advances a coordinate by `velocity` units of `step`, reflecting at the
// ends of [0, limit].
void bounce(int& position, int& velocity, int step, int limit) {
  int next = position + velocity * step;
  if (next < 0 || next > limit) {
    velocity = -velocity;
    next = position + velocity * step;
  }
  position = std::clamp(next, 0, limit);
}

}  // namespace

SequenceSource translating_square(const TranslatingSquareParams& params) {
  if (params.frames < 2 || params.size < 1 || params.square < 1 ||
      params.square > params.size || params.step < 0) {
    throw ValidationError("invalid translating-square parameters");
  }
  const int limit = params.size - params.square;
  if (params.start_x < 0 || params.start_x > limit || params.start_y < 0 ||
      params.start_y > limit) {
    throw ValidationError("the square must start inside the frame");
  }
  SequenceSource source;
  source.mode = SequenceMode::mask;
  int x = params.start_x;
  int y = params.start_y;
  int vx = params.velocity_x;
  int vy = params.velocity_y;
  for (int t = 0; t < params.frames; ++t) {
    if (t > 0) {
      bounce(x, vx, params.step, limit);
      bounce(y, vy, params.step, limit);
    }
    RgbImage image(params.size, params.size);
    fill(image, 0, 0, params.size, params.size, params.background);
    fill(image, y, x, params.square, params.square, params.object);
    IndexMask mask(params.size, params.size);
    fill(mask, y, x, params.square, params.square, 1);
    const double x1 = x + params.square - 1;
    const double y1 = y + params.square - 1;
    source.keypoints[t] = {{double(x), double(y)}, {x1, double(y)}, {double(x), y1}, {x1, y1}};
    source.frame_names.push_back(frame_name(t));
    source.frames.push_back(std::move(image));
    source.masks[t] = std::move(mask);
  }
  return source;
}

SequenceSource static_sequence(int frames, int size) {
  if (frames < 2 || size < 16 || size % 8 != 0) {
    throw ValidationError("static sequence needs >= 2 frames and a size that is a multiple of 8");
  }
  const int q = size / 4;
  RgbImage image(size, size);
  fill(image, 0, 0, size, size, Rgb{40, 90, 200});
  IndexMask mask(size, size);
  fill(image, q / 2, q / 2, q, q, Rgb{220, 40, 40});
  fill(mask, q / 2, q / 2, q, q, 1);
  fill(image, 2 * q, 2 * q, q + q / 2, q, Rgb{60, 190, 60});
  fill(mask, 2 * q, 2 * q, q + q / 2, q, 2);

  SequenceSource source;
  source.mode = SequenceMode::mask;
  for (int t = 0; t < frames; ++t) {
    source.frame_names.push_back(frame_name(t));
    source.frames.push_back(image);
    source.masks[t] = mask;
  }
  return source;
}

SequenceSource occlusion_sequence(const OcclusionParams& params) {
  // The bar is just wide enough to cover the square for `occluded_frames`
  // positions.
  const int bar_width = params.square + params.step * (params.occluded_frames - 1);
  const int travel = params.step * (params.frames - 1);
  const int slack = params.width - params.square - travel;
  if (params.step < 1 || params.occlusion_start < 1 || params.occluded_frames < 1 ||
      params.frames < params.occlusion_start + params.occluded_frames + 1 || slack < 0 ||
      params.height < params.square + 2 * params.step) {
    throw ValidationError("invalid occlusion parameters");
  }
  std::mt19937_64 rng(params.seed);
  auto jitter = [&rng](Rgb base) {
    auto shift = [&rng](std::uint8_t v) {
      const int d = static_cast<int>(rng() % 49) - 24;
      return static_cast<std::uint8_t>(std::clamp(v + d, 0, 255));
    };
    return Rgb{shift(base.r), shift(base.g), shift(base.b)};
  };
  const Rgb background = jitter(params.background);
  const Rgb object = jitter(params.object);
  const Rgb bar = jitter(params.occluder);

  auto pick = [&](int lo, int hi) {  // multiple of step in [lo, hi]
    const int slots = (hi - lo) / params.step + 1;
    return lo + params.step * static_cast<int>(rng() % static_cast<std::uint64_t>(slots));
  };
  const int x0 = pick(0, slack);
  const int y0 = pick(params.step, params.height - params.square - params.step);
  const int bar_x = x0 + params.step * params.occlusion_start;

  SequenceSource source;
  source.mode = SequenceMode::mask;
  for (int t = 0; t < params.frames; ++t) {
    const int x = x0 + params.step * t;
    RgbImage image(params.height, params.width);
    fill(image, 0, 0, params.height, params.width, background);
    fill(image, y0, x, params.square, params.square, object);
    fill(image, 0, bar_x, params.height, bar_width, bar);
    IndexMask mask(params.height, params.width);
    fill(mask, y0, x, params.square, params.square, 1);
    fill(mask, 0, bar_x, params.height, bar_width, 0);
    source.frame_names.push_back(frame_name(t));
    source.frames.push_back(std::move(image));
    source.masks[t] = std::move(mask);
  }
  return source;
}

}  // namespace memprop
