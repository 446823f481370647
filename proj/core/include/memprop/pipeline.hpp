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

#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "memprop/affinity.hpp"
#include "memprop/config.hpp"
#include "memprop/image.hpp"
#include "memprop/io.hpp"
#include "memprop/memory.hpp"
#include "memprop/sequence.hpp"

namespace memprop {

struct FrameDiagnostics {
  int frame_index = 0;
  double loss_nr = 0.0;
  double loss_pr = 1.0;
  double weight_nr = 1.0;  // fusion weight share of the plain branch
  NormalizedPoint peak;
  std::optional<AdmitResult> short_admission;
  std::optional<AdmitResult> long_admission;
  std::vector<int> evicted;
  int num_clusters = 0;
  std::vector<int> query_clusters;  // cluster index per grid cell
  int grid_rows = 0;
  int grid_cols = 0;
  double milliseconds = 0.0;
};

struct PropagationState {
  PipelineConfig config;
  LabelKind kind = LabelKind::mask_onehot;
  int image_height = 0;
  int image_width = 0;
  int feature_height = 0;
  int feature_width = 0;
  MemoryBanks banks;
  int current_index = 0;  // last frame processed
  std::vector<LabelField> outputs;  // per propagated frame, feature resolution
  std::vector<FrameDiagnostics> diagnostics;
  std::optional<FrameRecord> pending;  // previous frame, awaiting the peak test
  std::deque<FrameRecord> history;     // recent frames, long-term candidates
};

/// Seeds both banks with the annotated first frame. `labels` and the frame's
/// a-channel are taken at feature resolution.
PropagationState start_propagation(const PipelineConfig& config,
                                   const FeatureMap& features,
                                   const RgbImage& image, const LabelField& labels);

/// Propagates labels to the next frame and advances the memory banks.
///
/// The plain branch takes a joint softmax over every bank frame. The
/// prediction branch uses label-enhanced features against short-term frames
/// and cluster-restricted affinities against long-term frames; its blocks
/// are concatenated and renormalized. The two branches are fused by their
/// a-channel reconstruction losses on the observed query frame.
LabelField propagate_frame(PropagationState& state, const FeatureMap& query_features,
                           const RgbImage& query_image);

struct PropagationResult {
  PropagationState state;
  SequenceMode mode = SequenceMode::mask;
  std::vector<IndexMask> masks;          // mask mode, one per frame
  KeypointTrack keypoints;               // keypoint mode
  std::vector<LabelField> color;         // color mode, image resolution
};

using FrameObserver = std::function<void(const PropagationState&)>;

PropagationResult propagate_sequence(const SequenceSource& source,
                                     const FeatureProvider& provider,
                                     const PipelineConfig& config,
                                     const FrameObserver& observer = {});
PropagationResult propagate_sequence(const SequenceSource& source,
                                     const PipelineConfig& config,
                                     const FrameObserver& observer = {});

/// Gaussian heatmap per keypoint at feature resolution (sigma in feature
/// pixels); missing keypoints give an all-zero channel. `stride` maps image
/// pixels to feature pixels.
LabelField keypoint_heatmaps(const KeypointFrame& keypoints, int feature_height,
                             int feature_width, double stride, double sigma = 2.0);
/// Heatmap argmax per channel, refined by the weighted centroid of its 3x3
/// neighbourhood and mapped back to image pixels. All-zero channels give a
/// missing keypoint.
KeypointFrame heatmap_keypoints(const LabelField& heatmaps, double stride);

/// Feature-resolution class probabilities for an image-resolution mask.
LabelField mask_labels(const IndexMask& mask, int num_classes, int feature_height,
                       int feature_width);
/// Argmax class per feature pixel, replicated over the image block that
/// feature pixel covers.
IndexMask labels_to_mask(const LabelField& labels, int height, int width);

}  // namespace memprop
