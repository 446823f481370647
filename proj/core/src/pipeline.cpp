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

#include "memprop/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "memprop/clustering.hpp"
#include "memprop/color.hpp"
#include "memprop/errors.hpp"
#include "memprop/feature_core.hpp"
#include "memprop/prediction.hpp"

namespace memprop {

namespace {

LabelField observed_color(const RgbImage& image, int feature_height, int feature_width) {
  return downsample_to(rgb_to_lab_a_channel(image), feature_height, feature_width);
}

NormalizedPoint frame_peak(const FeatureMap& features) {
  return peak_location(features, BlurParams::for_extent(features.height(), features.width()));
}

// Divides every row by its sum; the blocks being joined are each
// row-stochastic, so sums are positive.
AffinityMatrix concatenate_columns(const std::vector<AffinityMatrix>& blocks) {
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.source_pixels();
  const auto& first = blocks.front();
  Eigen::MatrixXd joined(first.target_pixels(), cols);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    joined.middleCols(offset, b.source_pixels()) = b.weights();
    offset += b.source_pixels();
  }
  const Eigen::VectorXd sums = joined.rowwise().sum();
  joined.array().colwise() /= sums.array();
  return {first.target_height(), first.target_width(), std::move(joined)};
}

struct PredictionInputs {
  const FeatureMap& query;
  std::vector<GridCell> cells;
  ClusterModel model;
  int grid_size = 1;
};

FeatureMap enhance(const FeatureMap& map, const std::vector<GridCell>& cells,
                   const ClusterModel& model, const PipelineConfig& config,
                   int grid_size) {
  LabelOptimizeParams params;
  params.zeta = config.zeta;
  params.steps = config.steps;
  params.step_size = config.step_size;
  const LabelOptimizeResult opt = forward_label_optimize(model, cells, params);
  return apply_labels(map, cells, opt.labels, grid_size);
}

// Label-enhanced joint affinity against the short-term frames.
AffinityMatrix forward_path(const PredictionInputs& in,
                            const std::vector<const FrameRecord*>& refs,
                            const PipelineConfig& config) {
  const FeatureMap query = enhance(in.query, in.cells, in.model, config, in.grid_size);
  std::vector<FeatureMap> enhanced;
  enhanced.reserve(refs.size());
  for (const FrameRecord* r : refs) {
    const auto cells = partition_grids(r->features, in.grid_size);
    const ReferenceAssignment assignment = cluster_reference(cells, in.model);
    const ClusterModel ref_model = reference_cluster_model(cells, assignment, in.model);
    enhanced.push_back(enhance(r->features, cells, ref_model, config, in.grid_size));
  }
  return compute_affinity(query, std::span<const FeatureMap>(enhanced), config.temperature);
}

// Cluster-restricted affinity against each long-term frame, averaged.
AffinityMatrix backward_path(const PredictionInputs& in,
                             const std::vector<const FrameRecord*>& refs,
                             const PipelineConfig& config) {
  const int num_cells = static_cast<int>(in.cells.size());
  const ClusterSplitFeatures query_split = split_by_cluster(
      in.query, in.model.assignment(num_cells), in.model.size(), in.grid_size);
  std::vector<AffinityMatrix> blocks;
  for (const FrameRecord* r : refs) {
    const auto cells = partition_grids(r->features, in.grid_size);
    const ReferenceAssignment assignment = cluster_reference(cells, in.model);
    const ClusterSplitFeatures ref_split = split_by_cluster(
        r->features, assignment.cluster_of, in.model.size(), in.grid_size);
    try {
      blocks.push_back(merged_restricted_affinity(query_split, ref_split, in.query.height(),
                                                  in.query.width(), config.temperature));
    } catch (const ValidationError&) {
      // Every reference cell was discarded: fall back to the plain affinity.
      const FeatureMap* ref = &r->features;
      blocks.push_back(compute_affinity(in.query, std::span<const FeatureMap* const>(&ref, 1),
                                        config.temperature));
    }
  }
  return concatenate_columns(blocks);
}

}  // namespace

LabelField mask_labels(const IndexMask& mask, int num_classes, int feature_height,
                       int feature_width) {
  return downsample_to(one_hot(mask.data, mask.height, mask.width, num_classes),
                       feature_height, feature_width);
}

IndexMask labels_to_mask(const LabelField& labels, int height, int width) {
  IndexMask mask(height, width);
  const std::vector<int> classes = labels.argmax();
  for (int r = 0; r < height; ++r) {
    const int fr = std::min(labels.height() - 1, r * labels.height() / height);
    for (int c = 0; c < width; ++c) {
      const int fc = std::min(labels.width() - 1, c * labels.width() / width);
      mask.at(r, c) = classes[fr * labels.width() + fc];
    }
  }
  return mask;
}

LabelField keypoint_heatmaps(const KeypointFrame& keypoints, int feature_height,
                             int feature_width, double stride, double sigma) {
  if (keypoints.empty()) throw ValidationError("keypoint frame is empty");
  LabelField out(feature_height, feature_width, static_cast<int>(keypoints.size()),
                 LabelKind::keypoint_heatmap);
  for (std::size_t k = 0; k < keypoints.size(); ++k) {
    if (keypoints[k].missing()) continue;
    const double fx = (keypoints[k].x + 0.5) / stride - 0.5;
    const double fy = (keypoints[k].y + 0.5) / stride - 0.5;
    for (int r = 0; r < feature_height; ++r) {
      for (int c = 0; c < feature_width; ++c) {
        const double d2 = (c - fx) * (c - fx) + (r - fy) * (r - fy);
        out.at(r, c, static_cast<int>(k)) = std::exp(-d2 / (2.0 * sigma * sigma));
      }
    }
  }
  return out;
}

KeypointFrame heatmap_keypoints(const LabelField& heatmaps, double stride) {
  KeypointFrame out(heatmaps.label_dim());
  for (int k = 0; k < heatmaps.label_dim(); ++k) {
    int best_r = 0;
    int best_c = 0;
    double best = 0.0;
    for (int r = 0; r < heatmaps.height(); ++r) {
      for (int c = 0; c < heatmaps.width(); ++c) {
        if (heatmaps.at(r, c, k) > best) {
          best = heatmaps.at(r, c, k);
          best_r = r;
          best_c = c;
        }
      }
    }
    if (best <= 0.0) continue;
    double sx = 0.0, sy = 0.0, sw = 0.0;
    for (int r = std::max(0, best_r - 1); r <= std::min(heatmaps.height() - 1, best_r + 1);
         ++r) {
      for (int c = std::max(0, best_c - 1); c <= std::min(heatmaps.width() - 1, best_c + 1);
           ++c) {
        const double w = heatmaps.at(r, c, k);
        sx += w * c;
        sy += w * r;
        sw += w;
      }
    }
    out[k].x = (sx / sw + 0.5) * stride - 0.5;
    out[k].y = (sy / sw + 0.5) * stride - 0.5;
  }
  return out;
}

PropagationState start_propagation(const PipelineConfig& config, const FeatureMap& features,
                                   const RgbImage& image, const LabelField& labels) {
  config.validate();
  if (labels.height() != features.height() || labels.width() != features.width()) {
    throw ValidationError("seed labels must be at feature resolution");
  }
  PropagationState state;
  state.config = config;
  state.banks = MemoryBanks(config.memory);
  state.kind = labels.kind();
  state.image_height = image.height;
  state.image_width = image.width;
  state.feature_height = features.height();
  state.feature_width = features.width();

  FrameRecord first;
  first.frame_index = 0;
  first.features = features;
  first.labels = labels;
  first.color = observed_color(image, features.height(), features.width());
  first.peak = frame_peak(features);
  state.banks.seed(first);
  state.history.push_back(std::move(first));
  return state;
}

LabelField propagate_frame(PropagationState& state, const FeatureMap& query_features,
                           const RgbImage& query_image) {
  const auto started = std::chrono::steady_clock::now();
  const PipelineConfig& config = state.config;
  const int t = state.current_index + 1;
  if (state.banks.empty()) throw ValidationError("memory banks are empty; seed frame 0 first");
  const FeatureMap& any_ref = state.banks.short_term().empty()
                                  ? state.banks.long_term().front().features
                                  : state.banks.short_term().front().features;
  if (query_features.channels() != any_ref.channels() ||
      query_features.height() != state.feature_height ||
      query_features.width() != state.feature_width) {
    throw ValidationError("frame " + std::to_string(t) + ": feature map is " +
                          std::to_string(query_features.height()) + "x" +
                          std::to_string(query_features.width()) + "x" +
                          std::to_string(query_features.channels()) +
                          ", sequence expects " + std::to_string(state.feature_height) + "x" +
                          std::to_string(state.feature_width) + "x" +
                          std::to_string(any_ref.channels()));
  }

  FrameDiagnostics diag;
  diag.frame_index = t;
  diag.peak = frame_peak(query_features);
  const LabelField query_color =
      observed_color(query_image, state.feature_height, state.feature_width);

  // The previous frame becomes a short-term reference if its peak is near
  // this frame's peak.
  if (state.pending) {
    const AdmitResult admit =
        state.banks.try_admit_short_term(*state.pending, diag.peak, query_features);
    if (admit.evicted) diag.evicted.push_back(*admit.evicted);
    diag.short_admission = admit;
    state.pending.reset();
  }

  std::vector<const FrameRecord*> short_refs;
  std::vector<const FrameRecord*> long_refs;
  for (const auto& r : state.banks.short_term()) short_refs.push_back(&r);
  for (const auto& r : state.banks.long_term()) long_refs.push_back(&r);
  std::vector<const FeatureMap*> ref_features;
  std::vector<const LabelField*> ref_labels;
  std::vector<const LabelField*> ref_colors;
  for (const auto* group : {&short_refs, &long_refs}) {
    for (const FrameRecord* r : *group) {
      ref_features.push_back(&r->features);
      ref_labels.push_back(&r->labels);
      ref_colors.push_back(&r->color);
    }
  }

  const AffinityMatrix a_nr =
      compute_affinity(query_features, ref_features, config.temperature);
  diag.loss_nr = reconstruction_loss(reconstruct_labels(a_nr, ref_colors), query_color);

  AffinityMatrix fused = a_nr;
  if (config.prediction_branch) {
    const int grid_size = std::min(
        grid_size_for(state.feature_height, state.feature_width, config.grid_cells),
        std::max(state.feature_height, state.feature_width));
    ClusterParams cparams;
    cparams.grid_size = grid_size;
    cparams.lambda = config.lambda;
    PredictionInputs in{query_features, partition_grids(query_features, grid_size), {},
                        grid_size};
    in.model = cluster_target(in.cells, cparams);
    diag.num_clusters = in.model.size();
    diag.query_clusters = in.model.assignment(static_cast<int>(in.cells.size()));
    diag.grid_rows = in.model.grid_rows;
    diag.grid_cols = in.model.grid_cols;

    std::vector<AffinityMatrix> blocks;
    if (!short_refs.empty()) blocks.push_back(forward_path(in, short_refs, config));
    if (!long_refs.empty()) blocks.push_back(backward_path(in, long_refs, config));
    const AffinityMatrix a_pr = concatenate_columns(blocks);
    diag.loss_pr = reconstruction_loss(reconstruct_labels(a_pr, ref_colors), query_color);
    fused = fuse_affinity(a_nr, diag.loss_nr, a_pr, diag.loss_pr);
    const double w_nr = 1.0 - diag.loss_pr;
    const double w_pr = 1.0 - diag.loss_nr;
    diag.weight_nr = w_nr + w_pr > 0.0 ? w_nr / (w_nr + w_pr) : 0.5;
  }

  LabelField output = reconstruct_labels(fused, ref_labels);

  FrameRecord record;
  record.frame_index = t;
  record.features = query_features;
  // Masks enter memory as hard one-hot labels so that soft boundaries do not
  // compound from frame to frame.
  record.labels = state.kind == LabelKind::mask_onehot
                      ? one_hot(output.argmax(), output.height(), output.width(),
                                output.label_dim())
                      : output;
  record.color = query_color;
  record.peak = diag.peak;

  // Long-term candidate: the frame exactly long_min_gap behind, admitted when
  // its solo reconstruction agrees with the short-term reconstruction.
  const MemoryConfig& mem = config.memory;
  if (state.kind == LabelKind::mask_onehot && mem.long_term_enabled &&
      t - mem.long_min_gap >= 0) {
    const int wanted = t - mem.long_min_gap;
    for (const FrameRecord& candidate : state.history) {
      if (candidate.frame_index != wanted) continue;
      if (state.banks.contains(Bank::long_term, wanted)) break;
      if (short_refs.empty()) break;
      // A joint softmax over a subset of references is the full softmax
      // restricted to those columns and renormalized, so the short-term
      // reconstruction reuses the plain branch's affinity.
      Eigen::Index short_pixels = 0;
      std::vector<const LabelField*> st_labels;
      for (const FrameRecord* r : short_refs) {
        short_pixels += r->features.pixels();
        st_labels.push_back(&r->labels);
      }
      Eigen::MatrixXd st_weights = a_nr.weights().leftCols(short_pixels);
      const Eigen::VectorXd st_sums = st_weights.rowwise().sum();
      st_weights.array().colwise() /= st_sums.array();
      const LabelField recon_short = reconstruct_labels(
          AffinityMatrix(a_nr.target_height(), a_nr.target_width(), std::move(st_weights)),
          st_labels);
      const FeatureMap* cand_features = &candidate.features;
      const LabelField* cand_labels = &candidate.labels;
      const LabelField recon_long = reconstruct_labels(
          compute_affinity(query_features,
                           std::span<const FeatureMap* const>(&cand_features, 1),
                           config.temperature),
          std::span<const LabelField* const>(&cand_labels, 1));
      const AdmitResult admit =
          state.banks.try_admit_long_term(candidate, record, recon_short, recon_long);
      if (admit.evicted) diag.evicted.push_back(*admit.evicted);
      diag.long_admission = admit;
      break;
    }
  }

  state.history.push_back(record);
  while (static_cast<int>(state.history.size()) > mem.long_min_gap + 1) {
    state.history.pop_front();
  }
  state.pending = std::move(record);
  state.current_index = t;

#ifndef NDEBUG
  if (const std::string broken = state.banks.check_invariants(); !broken.empty()) {
    throw std::logic_error("memory invariant violated after frame " + std::to_string(t) +
                           ": " + broken);
  }
#endif

  diag.milliseconds = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - started)
                          .count();
  state.outputs.push_back(output);
  state.diagnostics.push_back(std::move(diag));
  return output;
}

namespace {

template <typename Error>
[[noreturn]] void rethrow_with_frame(int index, const Error& e) {
  const std::string what = e.what();
  if (what.rfind("frame ", 0) == 0) throw e;
  throw Error("frame " + std::to_string(index) + ": " + what);
}

}  // namespace

PropagationResult propagate_sequence(const SequenceSource& source,
                                     const FeatureProvider& provider,
                                     const PipelineConfig& config,
                                     const FrameObserver& observer) {
  source.validate();
  config.validate();
  PropagationResult result;
  result.mode = source.mode;

  auto features_for = [&](int index) {
    try {
      return provider.features(index, source.frames[index]);
    } catch (const ValidationError& e) {
      rethrow_with_frame(index, e);
    } catch (const IoError& e) {
      rethrow_with_frame(index, e);
    }
  };

  const RgbImage& first = source.frames.front();
  const FeatureMap f0 = features_for(0);
  const double stride = static_cast<double>(first.width) / f0.width();
  LabelField seed;
  int num_classes = 0;
  switch (source.mode) {
    case SequenceMode::mask:
      num_classes = source.masks.at(0).max_index() + 1;
      seed = mask_labels(source.masks.at(0), num_classes, f0.height(), f0.width());
      result.masks.push_back(source.masks.at(0));
      break;
    case SequenceMode::keypoint:
      seed = keypoint_heatmaps(source.keypoints.at(0), f0.height(), f0.width(), stride);
      result.keypoints[0] = source.keypoints.at(0);
      break;
    case SequenceMode::color:
      seed = observed_color(first, f0.height(), f0.width());
      result.color.push_back(rgb_to_lab_a_channel(first));
      break;
  }

  result.state = start_propagation(config, f0, first, seed);
  for (int t = 1; t < source.size(); ++t) {
    const FeatureMap features = features_for(t);
    LabelField out;
    try {
      out = propagate_frame(result.state, features, source.frames[t]);
    } catch (const ValidationError& e) {
      rethrow_with_frame(t, e);
    }
    switch (source.mode) {
      case SequenceMode::mask:
        result.masks.push_back(labels_to_mask(out, first.height, first.width));
        break;
      case SequenceMode::keypoint:
        result.keypoints[t] = heatmap_keypoints(out, stride);
        break;
      case SequenceMode::color:
        result.color.push_back(upsample_bilinear(out, first.height, first.width));
        break;
    }
    if (observer) observer(result.state);
  }
  return result;
}

PropagationResult propagate_sequence(const SequenceSource& source,
                                     const PipelineConfig& config,
                                     const FrameObserver& observer) {
  return propagate_sequence(source, FeatureProvider::from_config(config, source), config,
                            observer);
}

}  // namespace memprop
