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

#include "memprop/builtin_features.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "memprop/color.hpp"
#include "memprop/errors.hpp"

namespace memprop {

FeatureMap patch_descriptors(const RgbImage& frame, const DescriptorParams& params) {
  if (!frame.valid()) throw ValidationError("feature extraction needs an RGB image");
  const int p = params.patch_size;
  if (p < 1) throw ValidationError("patch size must be at least 1");
  if (frame.height < p || frame.width < p) {
    throw ValidationError("image is smaller than one patch");
  }
  const int H = frame.height;
  const int W = frame.width;
  std::vector<Lab> lab(static_cast<std::size_t>(H) * W);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const auto* px = frame.pixel(y, x);
      lab[static_cast<std::size_t>(y) * W + x] = srgb_to_lab(px[0], px[1], px[2]);
    }
  }
  auto lightness = [&](int y, int x) {
    y = std::clamp(y, 0, H - 1);
    x = std::clamp(x, 0, W - 1);
    return lab[static_cast<std::size_t>(y) * W + x].l;
  };

  const int fh = H / p;
  const int fw = W / p;
  FeatureMap out(fh, fw, kBuiltinChannels);
  const double n = static_cast<double>(p) * p;
  for (int r = 0; r < fh; ++r) {
    for (int c = 0; c < fw; ++c) {
      double sum[3] = {0, 0, 0};
      double sq[3] = {0, 0, 0};
      double hist[4] = {0, 0, 0, 0};
      for (int y = r * p; y < (r + 1) * p; ++y) {
        for (int x = c * p; x < (c + 1) * p; ++x) {
          const Lab& v = lab[static_cast<std::size_t>(y) * W + x];
          const double ch[3] = {v.l, v.a, v.b};
          for (int k = 0; k < 3; ++k) {
            sum[k] += ch[k];
            sq[k] += ch[k] * ch[k];
          }
          const double gx = 0.5 * (lightness(y, x + 1) - lightness(y, x - 1));
          const double gy = 0.5 * (lightness(y + 1, x) - lightness(y - 1, x));
          const double mag = std::hypot(gx, gy);
          if (mag == 0.0) continue;
          double theta = std::atan2(gy, gx);
          if (theta < 0.0) theta += std::numbers::pi;
          const int bin = static_cast<int>(std::lround(theta / (std::numbers::pi / 4))) % 4;
          hist[bin] += mag;
        }
      }
      auto px = out.pixel(r, c);
      for (int k = 0; k < 3; ++k) {
        const double mean = sum[k] / n;
        px[k] = mean;
        // Snap rounding residue to zero so uniform patches have exactly zero
        // spread; standardization would otherwise amplify it.
        const double var = sq[k] / n - mean * mean;
        px[3 + k] = var > 1e-9 * (1.0 + mean * mean) ? std::sqrt(var) : 0.0;
      }
      for (int k = 0; k < 4; ++k) px[6 + k] = hist[k] / n;
    }
  }
  return out;
}

FeatureMap standardize_channels(const FeatureMap& map) {
  FeatureMap out = map;
  const double n = static_cast<double>(map.pixels());
  for (int ch = 0; ch < map.channels(); ++ch) {
    double sum = 0.0;
    for (int r = 0; r < map.height(); ++r) {
      for (int c = 0; c < map.width(); ++c) sum += map.at(r, c, ch);
    }
    const double mean = sum / n;
    double var = 0.0;
    for (int r = 0; r < map.height(); ++r) {
      for (int c = 0; c < map.width(); ++c) {
        const double d = map.at(r, c, ch) - mean;
        var += d * d;
      }
    }
    const double sd = std::sqrt(var / n);
    const bool constant = sd <= 1e-9 * (1.0 + std::abs(mean));
    for (int r = 0; r < map.height(); ++r) {
      for (int c = 0; c < map.width(); ++c) {
        out.at(r, c, ch) = constant ? 0.0 : (map.at(r, c, ch) - mean) / sd;
      }
    }
  }
  return out;
}

FeatureMap builtin_features(const RgbImage& frame, const DescriptorParams& params) {
  return standardize_channels(patch_descriptors(frame, params));
}

}  // namespace memprop
