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

#include "memprop/sequence.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "memprop/errors.hpp"

namespace fs = std::filesystem;

namespace memprop {

std::string_view to_string(SequenceMode mode) {
  switch (mode) {
    case SequenceMode::color: return "color";
    case SequenceMode::mask: return "mask";
    case SequenceMode::keypoint: return "keypoint";
  }
  return "unknown";
}

SequenceMode parse_sequence_mode(std::string_view text) {
  if (text == "color") return SequenceMode::color;
  if (text == "mask") return SequenceMode::mask;
  if (text == "keypoint") return SequenceMode::keypoint;
  throw ValidationError("unknown mode '" + std::string(text) + "'");
}

LabelKind label_kind_for(SequenceMode mode) {
  switch (mode) {
    case SequenceMode::color: return LabelKind::color_a_channel;
    case SequenceMode::mask: return LabelKind::mask_onehot;
    case SequenceMode::keypoint: return LabelKind::keypoint_heatmap;
  }
  return LabelKind::color_a_channel;
}

void SequenceSource::validate() const {
  if (frames.size() < 2) throw ValidationError("a sequence needs at least two frames");
  if (frame_names.size() != frames.size()) {
    throw ValidationError("frame names and frames differ in count");
  }
  for (const auto& f : frames) {
    if (!f.valid()) throw ValidationError("sequence holds an invalid frame");
    if (f.height != frames.front().height || f.width != frames.front().width) {
      throw ValidationError("sequence frames differ in size");
    }
  }
  if (mode == SequenceMode::mask) {
    const auto it = masks.find(0);
    if (it == masks.end()) throw ValidationError("mask mode needs a mask for frame 0");
    for (const auto& [index, m] : masks) {
      if (m.height != frames.front().height || m.width != frames.front().width) {
        throw ValidationError("mask " + std::to_string(index) + " differs in size from frames");
      }
    }
    if (it->second.max_index() < 1) {
      throw ValidationError("the frame 0 mask has no object");
    }
  }
  if (mode == SequenceMode::keypoint && !keypoints.contains(0)) {
    throw ValidationError("keypoint mode needs keypoints for frame 0");
  }
  if (!features.empty()) {
    if (features.size() != frames.size()) {
      throw ValidationError("precomputed features do not cover every frame");
    }
    for (std::size_t i = 1; i < features.size(); ++i) {
      if (features[i].channels() != features.front().channels()) {
        throw ValidationError("precomputed features for frame " + std::to_string(i) + " have " +
                              std::to_string(features[i].channels()) + " channels, frame 0 has " +
                              std::to_string(features.front().channels()));
      }
    }
  }
}

SequenceSource load_sequence(const fs::path& dir) {
  const fs::path frames_dir = dir / "frames";
  if (!fs::is_directory(frames_dir)) {
    throw IoError("sequence " + dir.string() + " has no frames/ directory");
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(frames_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());

  SequenceSource src;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    src.frame_names.push_back(paths[i].stem().string());
    try {
      src.frames.push_back(read_rgb_png(paths[i]));
    } catch (const IoError& e) {
      throw IoError("frame " + std::to_string(i) + ": " + e.what());
    }
  }

  const fs::path masks_dir = dir / "masks";
  const fs::path keypoint_file = dir / "keypoints.txt";
  if (fs::is_directory(masks_dir)) {
    src.mode = SequenceMode::mask;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const fs::path m = masks_dir / (src.frame_names[i] + ".png");
      if (fs::exists(m)) src.masks[static_cast<int>(i)] = read_index_png(m);
    }
  } else if (fs::exists(keypoint_file)) {
    src.mode = SequenceMode::keypoint;
    src.keypoints = read_keypoints_file(keypoint_file);
  }

  const fs::path features_dir = dir / "features";
  if (fs::is_directory(features_dir)) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const fs::path f = features_dir / (src.frame_names[i] + ".dmpf");
      if (!fs::exists(f)) {
        throw IoError("frame " + std::to_string(i) + ": missing feature file " + f.string());
      }
      src.features.push_back(read_feature_file(f));
    }
  }
  src.validate();
  return src;
}

void save_sequence(const fs::path& dir, const SequenceSource& source) {
  source.validate();
  fs::create_directories(dir / "frames");
  for (int i = 0; i < source.size(); ++i) {
    write_rgb_png(dir / "frames" / (source.frame_names[i] + ".png"), source.frames[i]);
  }
  if (source.mode == SequenceMode::mask) {
    fs::create_directories(dir / "masks");
    for (const auto& [index, mask] : source.masks) {
      write_index_png(dir / "masks" / (source.frame_names.at(index) + ".png"), mask);
    }
  } else if (source.mode == SequenceMode::keypoint) {
    write_keypoints_file(dir / "keypoints.txt", source.keypoints);
  }
  if (!source.features.empty()) {
    fs::create_directories(dir / "features");
    for (int i = 0; i < source.size(); ++i) {
      write_feature_file(dir / "features" / (source.frame_names[i] + ".dmpf"),
                         source.features[i]);
    }
  }
}

FeatureProvider FeatureProvider::builtin(DescriptorParams params) {
  FeatureProvider p;
  p.kind_ = ProviderKind::builtin;
  p.params_ = params;
  return p;
}

FeatureProvider FeatureProvider::precomputed(std::vector<FeatureMap> maps) {
  FeatureProvider p;
  p.kind_ = ProviderKind::precomputed;
  p.maps_ = std::move(maps);
  return p;
}

FeatureProvider FeatureProvider::from_config(const PipelineConfig& config,
                                             const SequenceSource& source) {
  if (config.provider == ProviderKind::builtin) {
    return builtin(DescriptorParams{config.patch_size});
  }
  if (source.features.empty()) {
    throw ValidationError("provider = precomputed but the sequence has no features/");
  }
  return precomputed(source.features);
}

FeatureMap FeatureProvider::features(int frame_index, const RgbImage& frame) const {
  if (kind_ == ProviderKind::builtin) return builtin_features(frame, params_);
  if (frame_index < 0 || frame_index >= static_cast<int>(maps_.size())) {
    throw ValidationError("no precomputed features for frame " + std::to_string(frame_index));
  }
  return maps_[frame_index];
}

}  // namespace memprop
