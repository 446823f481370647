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

#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <vector>

#include "memprop/feature_map.hpp"
#include "memprop/image.hpp"

namespace memprop {

// PNG. Any 8-bit or 16-bit gray/RGB/palette input is expanded to RGB.
RgbImage read_rgb_png(const std::filesystem::path& path);
void write_rgb_png(const std::filesystem::path& path, const RgbImage& image);

/// Reads palette indices (or gray levels of a grayscale PNG) without
/// expansion.
IndexMask read_index_png(const std::filesystem::path& path);
/// Writes an indexed-palette PNG with the DAVIS color palette.
void write_index_png(const std::filesystem::path& path, const IndexMask& mask);
void write_gray_png(const std::filesystem::path& path, int height, int width,
                    const std::vector<unsigned char>& gray);

/// Feature map files: "DMPF", version byte, uint32 LE h, w, c, then h*w*c
/// float32 LE values, channel-last row-major.
constexpr std::uint8_t kFeatureFileVersion = 1;
void write_feature_map(std::ostream& out, const FeatureMap& map);
FeatureMap read_feature_map(std::istream& in);
void write_feature_file(const std::filesystem::path& path, const FeatureMap& map);
FeatureMap read_feature_file(const std::filesystem::path& path);

/// Keypoints in pixel coordinates; missing ones are NaN.
struct Keypoint {
  double x = std::numeric_limits<double>::quiet_NaN();
  double y = std::numeric_limits<double>::quiet_NaN();
  bool missing() const { return std::isnan(x) || std::isnan(y); }
};
using KeypointFrame = std::vector<Keypoint>;
using KeypointTrack = std::map<int, KeypointFrame>;  // by frame index

/// One line per frame: frame index, then x y pairs; "nan nan" = missing.
KeypointTrack read_keypoints(std::istream& in);
KeypointTrack read_keypoints_file(const std::filesystem::path& path);
void write_keypoints(std::ostream& out, const KeypointTrack& track);
void write_keypoints_file(const std::filesystem::path& path,
                          const KeypointTrack& track);

}  // namespace memprop
