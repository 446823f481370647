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

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "memprop/errors.hpp"
#include "memprop/io.hpp"

namespace memprop {

namespace {

double parse_coordinate(const std::string& token, int line_no) {
  if (token == "nan" || token == "NaN") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size()) {
    throw IoError("keypoint line " + std::to_string(line_no) + ": bad coordinate '" +
                  token + "'");
  }
  return v;
}

}  // namespace

KeypointTrack read_keypoints(std::istream& in) {
  KeypointTrack track;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;  // blank line
    int frame = 0;
    try {
      std::size_t used = 0;
      frame = std::stoi(token, &used);
      if (used != token.size() || frame < 0) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw IoError("keypoint line " + std::to_string(line_no) + ": bad frame index");
    }
    std::vector<std::string> coords;
    while (fields >> token) coords.push_back(token);
    if (coords.size() % 2 != 0) {
      throw IoError("keypoint line " + std::to_string(line_no) + ": odd coordinate count");
    }
    KeypointFrame kps;
    for (std::size_t i = 0; i < coords.size(); i += 2) {
      Keypoint kp;
      kp.x = parse_coordinate(coords[i], line_no);
      kp.y = parse_coordinate(coords[i + 1], line_no);
      if (kp.missing()) kp = Keypoint{};
      kps.push_back(kp);
    }
    track[frame] = std::move(kps);
  }
  return track;
}

KeypointTrack read_keypoints_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_keypoints(in);
}

void write_keypoints(std::ostream& out, const KeypointTrack& track) {
  const auto flags = out.flags();
  out << std::setprecision(9);
  for (const auto& [frame, kps] : track) {
    out << frame;
    for (const Keypoint& kp : kps) {
      if (kp.missing()) {
        out << " nan nan";
      } else {
        out << ' ' << kp.x << ' ' << kp.y;
      }
    }
    out << '\n';
  }
  out.flags(flags);
}

void write_keypoints_file(const std::filesystem::path& path, const KeypointTrack& track) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path.string());
  write_keypoints(out, track);
}

}  // namespace memprop
