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

#include <vector>

#include "memprop/image.hpp"
#include "memprop/io.hpp"
#include "memprop/label_field.hpp"

namespace memprop {

/// IoU of two binary masks; 1 when both are empty.
double binary_iou(const std::vector<bool>& a, const std::vector<bool>& b);

/// Per-object IoU averaged over objects 1..num_objects.
double region_similarity_J(const IndexMask& pred, const IndexMask& truth,
                           int num_objects);
double region_similarity_J(const LabelField& pred, const LabelField& truth);

/// Foreground pixels with a 4-neighbour outside the foreground. Pixels
/// beyond the image edge do not count as background.
std::vector<bool> mask_boundary(const std::vector<bool>& mask, int height, int width);

/// ceil(0.008 * image diagonal).
double default_boundary_tolerance(int height, int width);

/// Boundary F-measure of one binary mask pair: a boundary pixel matches when
/// the other boundary has a pixel within Euclidean distance `tolerance`.
/// Two empty boundaries give 1; F is 0 when P + R = 0.
double boundary_f_measure(const std::vector<bool>& pred, const std::vector<bool>& truth,
                          int height, int width, double tolerance);

/// Per-object boundary F averaged over objects 1..num_objects.
double contour_accuracy_F(const IndexMask& pred, const IndexMask& truth,
                          int num_objects, double tolerance);
double contour_accuracy_F(const LabelField& pred, const LabelField& truth,
                          double tolerance);

struct PckCount {
  int correct = 0;
  int total = 0;
  double value() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

/// Keypoints within alpha * max(bbox height, bbox width) of the non-missing
/// truth keypoints. Missing truth keypoints are skipped; a frame with no
/// truth keypoints contributes nothing.
PckCount pck_frame(const KeypointFrame& pred, const KeypointFrame& truth, double alpha);
/// Same with an explicit reference size in pixels.
PckCount pck_frame(const KeypointFrame& pred, const KeypointFrame& truth, double alpha,
                   double reference_size);
double keypoint_reference_size(const KeypointFrame& truth);
PckCount pck_at_alpha(const KeypointTrack& pred, const KeypointTrack& truth,
                      double alpha);

}  // namespace memprop
