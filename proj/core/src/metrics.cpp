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

#include "memprop/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "memprop/errors.hpp"

namespace memprop {

namespace {

std::vector<bool> object_mask(const std::vector<int>& labels, int object) {
  std::vector<bool> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i] == object;
  return out;
}

void require_same_size(int h1, int w1, int h2, int w2) {
  if (h1 != h2 || w1 != w2) {
    throw ValidationError("mask sizes differ: " + std::to_string(h1) + "x" +
                          std::to_string(w1) + " vs " + std::to_string(h2) + "x" +
                          std::to_string(w2));
  }
}

// Fraction of `from` boundary pixels with a `to` boundary pixel within
// `tolerance`.
double matched_fraction(const std::vector<bool>& from, const std::vector<bool>& to,
                        int height, int width, double tolerance, int& count) {
  const int reach = static_cast<int>(std::floor(tolerance));
  const double tol2 = tolerance * tolerance;
  int total = 0;
  int matched = 0;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (!from[r * width + c]) continue;
      ++total;
      bool hit = false;
      for (int dr = -reach; dr <= reach && !hit; ++dr) {
        const int rr = r + dr;
        if (rr < 0 || rr >= height) continue;
        for (int dc = -reach; dc <= reach; ++dc) {
          const int cc = c + dc;
          if (cc < 0 || cc >= width) continue;
          if (dr * dr + dc * dc <= tol2 && to[rr * width + cc]) {
            hit = true;
            break;
          }
        }
      }
      matched += hit;
    }
  }
  count = total;
  return total == 0 ? 0.0 : static_cast<double>(matched) / total;
}

}  // namespace

double binary_iou(const std::vector<bool>& a, const std::vector<bool>& b) {
  if (a.size() != b.size()) throw ValidationError("binary masks differ in size");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a[i] && b[i];
    uni += a[i] || b[i];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double region_similarity_J(const IndexMask& pred, const IndexMask& truth, int num_objects) {
  require_same_size(pred.height, pred.width, truth.height, truth.width);
  if (num_objects <= 0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= num_objects; ++k) {
    sum += binary_iou(object_mask(pred.data, k), object_mask(truth.data, k));
  }
  return sum / num_objects;
}

double region_similarity_J(const LabelField& pred, const LabelField& truth) {
  if (!pred.same_shape(truth)) throw ValidationError("label fields differ in shape");
  IndexMask p(pred.height(), pred.width());
  IndexMask t(truth.height(), truth.width());
  p.data = pred.argmax();
  t.data = truth.argmax();
  return region_similarity_J(p, t, pred.label_dim() - 1);
}

std::vector<bool> mask_boundary(const std::vector<bool>& mask, int height, int width) {
  std::vector<bool> out(mask.size(), false);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (!mask[r * width + c]) continue;
      const bool edge = (r > 0 && !mask[(r - 1) * width + c]) ||
                        (r + 1 < height && !mask[(r + 1) * width + c]) ||
                        (c > 0 && !mask[r * width + c - 1]) ||
                        (c + 1 < width && !mask[r * width + c + 1]);
      out[r * width + c] = edge;
    }
  }
  return out;
}

double default_boundary_tolerance(int height, int width) {
  return std::ceil(0.008 * std::hypot(static_cast<double>(height), static_cast<double>(width)));
}

double boundary_f_measure(const std::vector<bool>& pred, const std::vector<bool>& truth,
                          int height, int width, double tolerance) {
  const auto bp = mask_boundary(pred, height, width);
  const auto bt = mask_boundary(truth, height, width);
  int np = 0;
  int nt = 0;
  const double precision = matched_fraction(bp, bt, height, width, tolerance, np);
  const double recall = matched_fraction(bt, bp, height, width, tolerance, nt);
  if (np == 0 && nt == 0) return 1.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double contour_accuracy_F(const IndexMask& pred, const IndexMask& truth, int num_objects,
                          double tolerance) {
  require_same_size(pred.height, pred.width, truth.height, truth.width);
  if (num_objects <= 0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= num_objects; ++k) {
    sum += boundary_f_measure(object_mask(pred.data, k), object_mask(truth.data, k),
                              pred.height, pred.width, tolerance);
  }
  return sum / num_objects;
}

double contour_accuracy_F(const LabelField& pred, const LabelField& truth, double tolerance) {
  if (!pred.same_shape(truth)) throw ValidationError("label fields differ in shape");
  IndexMask p(pred.height(), pred.width());
  IndexMask t(truth.height(), truth.width());
  p.data = pred.argmax();
  t.data = truth.argmax();
  return contour_accuracy_F(p, t, pred.label_dim() - 1, tolerance);
}

double keypoint_reference_size(const KeypointFrame& truth) {
  double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
  for (const Keypoint& k : truth) {
    if (k.missing()) continue;
    x0 = std::min(x0, k.x);
    x1 = std::max(x1, k.x);
    y0 = std::min(y0, k.y);
    y1 = std::max(y1, k.y);
  }
  if (x1 < x0) return 0.0;
  return std::max(x1 - x0, y1 - y0);
}

PckCount pck_frame(const KeypointFrame& pred, const KeypointFrame& truth, double alpha,
                   double reference_size) {
  if (pred.size() != truth.size()) {
    throw ValidationError("keypoint counts differ: " + std::to_string(pred.size()) + " vs " +
                          std::to_string(truth.size()));
  }
  const double radius = alpha * reference_size;
  PckCount count;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i].missing()) continue;
    ++count.total;
    if (pred[i].missing()) continue;
    if (std::hypot(pred[i].x - truth[i].x, pred[i].y - truth[i].y) <= radius) ++count.correct;
  }
  return count;
}

PckCount pck_frame(const KeypointFrame& pred, const KeypointFrame& truth, double alpha) {
  return pck_frame(pred, truth, alpha, keypoint_reference_size(truth));
}

PckCount pck_at_alpha(const KeypointTrack& pred, const KeypointTrack& truth, double alpha) {
  PckCount total;
  for (const auto& [index, frame] : truth) {
    const auto it = pred.find(index);
    if (it == pred.end()) continue;
    const PckCount c = pck_frame(it->second, frame, alpha);
    total.correct += c.correct;
    total.total += c.total;
  }
  return total;
}

}  // namespace memprop
