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

#include "memprop/feature_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "memprop/errors.hpp"

namespace memprop {

namespace {

std::vector<double> gaussian_weights(double sigma, int radius) {
  std::vector<double> w(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) {
    w[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  }
  return w;
}

}  // namespace

BlurParams BlurParams::for_extent(int height, int width) {
  const double sigma = 0.05 * std::min(height, width);
  BlurParams p;
  p.sigma_x = sigma;
  p.sigma_y = sigma;
  p.radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  return p;
}

void BlurParams::validate() const {
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0) || !std::isfinite(sigma_x) ||
      !std::isfinite(sigma_y)) {
    throw ValidationError("blur sigmas must be positive and finite");
  }
  if (radius < 1) throw ValidationError("blur radius must be at least 1");
}

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

FeatureMap gaussian_blur_2d(const FeatureMap& map, const BlurParams& params) {
  params.validate();
  map.check_finite();
  const int h = map.height();
  const int w = map.width();
  const int c = map.channels();
  const int r = params.radius;

  // Outer product of the two axis profiles, normalized to unit mass.
  const auto wx = gaussian_weights(params.sigma_x, r);
  const auto wy = gaussian_weights(params.sigma_y, r);
  std::vector<double> kernel((2 * r + 1) * (2 * r + 1));
  double total = 0.0;
  for (int dy = 0; dy <= 2 * r; ++dy) {
    for (int dx = 0; dx <= 2 * r; ++dx) {
      kernel[dy * (2 * r + 1) + dx] = wy[dy] * wx[dx];
      total += wy[dy] * wx[dx];
    }
  }
  for (double& k : kernel) k /= total;

  FeatureMap out(h, w, c);
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      auto dst = out.pixel(row, col);
      for (int dy = -r; dy <= r; ++dy) {
        const int sr = reflect_index(row + dy, h);
        for (int dx = -r; dx <= r; ++dx) {
          const double k = kernel[(dy + r) * (2 * r + 1) + (dx + r)];
          const auto src = map.pixel(sr, reflect_index(col + dx, w));
          for (int ch = 0; ch < c; ++ch) dst[ch] += k * src[ch];
        }
      }
    }
  }
  return out;
}

NormalizedPoint peak_location(const FeatureMap& map, const BlurParams& params) {
  const FeatureMap blurred = gaussian_blur_2d(map, params);
  int best_row = 0;
  int best_col = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int row = 0; row < blurred.height(); ++row) {
    for (int col = 0; col < blurred.width(); ++col) {
      double sum = 0.0;
      for (double v : blurred.pixel(row, col)) sum += v;
      if (sum > best) {
        best = sum;
        best_row = row;
        best_col = col;
      }
    }
  }
  NormalizedPoint p;
  p.x = blurred.width() > 1 ? static_cast<double>(best_col) / (blurred.width() - 1) : 0.0;
  p.y = blurred.height() > 1 ? static_cast<double>(best_row) / (blurred.height() - 1)
                             : 0.0;
  return p;
}

double normalized_distance(const NormalizedPoint& a, const NormalizedPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace memprop
