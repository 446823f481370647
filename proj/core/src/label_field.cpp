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

#include "memprop/label_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memprop/errors.hpp"

namespace memprop {

std::string_view to_string(LabelKind kind) {
  switch (kind) {
    case LabelKind::color_a_channel: return "color_a_channel";
    case LabelKind::mask_onehot: return "mask_onehot";
    case LabelKind::keypoint_heatmap: return "keypoint_heatmap";
  }
  return "unknown";
}

LabelField::LabelField(int height, int width, int label_dim, LabelKind kind)
    : LabelField(height, width, label_dim, kind,
                 std::vector<double>(static_cast<std::size_t>(std::max(height, 0)) *
                                         std::max(width, 0) * std::max(label_dim, 0),
                                     0.0)) {}

LabelField::LabelField(int height, int width, int label_dim, LabelKind kind,
                       std::vector<double> data)
    : height_(height), width_(width), label_dim_(label_dim), kind_(kind),
      data_(std::move(data)) {
  if (height < 1 || width < 1 || label_dim < 1) {
    throw ValidationError("label field dimensions must be positive");
  }
  if (data_.size() != static_cast<std::size_t>(height) * width * label_dim) {
    throw ValidationError("label field data length does not match its dimensions");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw ValidationError("label field has a non-finite value");
  }
}

bool LabelField::satisfies_invariants(double tolerance) const {
  switch (kind_) {
    case LabelKind::mask_onehot:
      for (int p = 0; p < pixels(); ++p) {
        double sum = 0.0;
        for (int d = 0; d < label_dim_; ++d) {
          const double v = data_[static_cast<std::size_t>(p) * label_dim_ + d];
          if (v < -tolerance) return false;
          sum += v;
        }
        if (std::abs(sum - 1.0) > tolerance) return false;
      }
      return true;
    case LabelKind::keypoint_heatmap:
      return std::all_of(data_.begin(), data_.end(),
                         [&](double v) { return v >= -tolerance; });
    case LabelKind::color_a_channel:
      return label_dim_ == 1 &&
             std::all_of(data_.begin(), data_.end(), [&](double v) {
               return v >= -tolerance && v <= 1.0 + tolerance;
             });
  }
  return false;
}

std::vector<int> LabelField::argmax() const {
  std::vector<int> out(pixels(), 0);
  for (int p = 0; p < pixels(); ++p) {
    const double* v = data_.data() + static_cast<std::size_t>(p) * label_dim_;
    int best = 0;
    for (int d = 1; d < label_dim_; ++d) {
      if (v[d] > v[best]) best = d;
    }
    out[p] = best;
  }
  return out;
}

LabelField one_hot(std::span<const int> indices, int height, int width,
                   int num_classes) {
  if (indices.size() != static_cast<std::size_t>(height) * width) {
    throw ValidationError("index image size does not match its dimensions");
  }
  LabelField out(height, width, num_classes, LabelKind::mask_onehot);
  auto data = out.data();
  for (std::size_t p = 0; p < indices.size(); ++p) {
    const int k = indices[p];
    if (k < 0 || k >= num_classes) {
      throw ValidationError("class index " + std::to_string(k) + " outside [0, " +
                            std::to_string(num_classes) + ")");
    }
    data[p * num_classes + k] = 1.0;
  }
  return out;
}

LabelField downsample(const LabelField& field, int stride) {
  if (stride < 1) throw ValidationError("downsample stride must be at least 1");
  return downsample_to(field, field.height() / stride, field.width() / stride);
}

LabelField downsample_to(const LabelField& field, int height, int width) {
  if (height < 1 || width < 1) throw ValidationError("label field smaller than one block");
  const int sy = field.height() / height;
  const int sx = field.width() / width;
  if (sy < 1 || sx < 1) throw ValidationError("cannot downsample to a larger extent");
  const int d = field.label_dim();
  LabelField out(height, width, d, field.kind());
  const double norm = 1.0 / (static_cast<double>(sy) * sx);
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      for (int ch = 0; ch < d; ++ch) {
        double sum = 0.0;
        for (int y = 0; y < sy; ++y) {
          for (int x = 0; x < sx; ++x) sum += field.at(row * sy + y, col * sx + x, ch);
        }
        out.at(row, col, ch) = sum * norm;
      }
    }
  }
  return out;
}

LabelField upsample_bilinear(const LabelField& field, int height, int width) {
  if (height < 1 || width < 1) throw ValidationError("upsample target must be positive");
  const int d = field.label_dim();
  LabelField out(height, width, d, field.kind());
  const double sy = static_cast<double>(field.height()) / height;
  const double sx = static_cast<double>(field.width()) / width;
  auto sample_axis = [](double pos, int n, int& i0, int& i1, double& t) {
    pos = std::clamp(pos, 0.0, static_cast<double>(n - 1));
    i0 = static_cast<int>(std::floor(pos));
    i1 = std::min(i0 + 1, n - 1);
    t = pos - i0;
  };
  for (int row = 0; row < height; ++row) {
    int y0, y1;
    double ty;
    sample_axis((row + 0.5) * sy - 0.5, field.height(), y0, y1, ty);
    for (int col = 0; col < width; ++col) {
      int x0, x1;
      double tx;
      sample_axis((col + 0.5) * sx - 0.5, field.width(), x0, x1, tx);
      for (int ch = 0; ch < d; ++ch) {
        const double top = (1 - tx) * field.at(y0, x0, ch) + tx * field.at(y0, x1, ch);
        const double bottom =
            (1 - tx) * field.at(y1, x0, ch) + tx * field.at(y1, x1, ch);
        out.at(row, col, ch) = (1 - ty) * top + ty * bottom;
      }
    }
  }
  return out;
}

}  // namespace memprop
