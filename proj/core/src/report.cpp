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

#include "memprop/report.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "memprop/errors.hpp"
#include "memprop/metrics.hpp"

namespace memprop {

void EvalReport::summarize() {
  j_mean = f_mean = j_recall = f_recall = 0.0;
  if (!frames.empty()) {
    for (const FrameScore& s : frames) {
      j_mean += s.j;
      f_mean += s.f;
      j_recall += s.j > kRecallThreshold ? 1.0 : 0.0;
      f_recall += s.f > kRecallThreshold ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(frames.size());
    j_mean /= n;
    f_mean /= n;
    j_recall /= n;
    f_recall /= n;
  }
  jf_mean = 0.5 * (j_mean + f_mean);
}

EvalReport evaluate_masks(const std::map<int, IndexMask>& pred,
                          const std::map<int, IndexMask>& truth,
                          std::optional<int> skip_frame) {
  if (truth.empty()) throw ValidationError("no ground-truth masks to evaluate against");
  int num_objects = 0;
  for (const auto& [index, mask] : truth) num_objects = std::max(num_objects, mask.max_index());

  EvalReport report;
  report.mode = SequenceMode::mask;
  for (const auto& [index, p] : pred) {
    if (skip_frame && index == *skip_frame) continue;
    const auto it = truth.find(index);
    if (it == truth.end()) {
      throw ValidationError("frame " + std::to_string(index) + ": no ground-truth mask");
    }
    const IndexMask& t = it->second;
    FrameScore score;
    score.frame_index = index;
    score.j = region_similarity_J(p, t, num_objects);
    score.f = contour_accuracy_F(p, t, num_objects,
                                 default_boundary_tolerance(t.height, t.width));
    report.frames.push_back(score);
  }
  report.summarize();
  return report;
}

EvalReport evaluate_keypoints(const KeypointTrack& pred, const KeypointTrack& truth,
                              double alpha, std::optional<int> skip_frame) {
  if (truth.empty()) throw ValidationError("no ground-truth keypoints to evaluate against");
  EvalReport report;
  report.mode = SequenceMode::keypoint;
  report.pck_alpha = alpha;
  PckCount pooled;
  for (const auto& [index, p] : pred) {
    if (skip_frame && index == *skip_frame) continue;
    const auto it = truth.find(index);
    if (it == truth.end()) {
      throw ValidationError("frame " + std::to_string(index) + ": no ground-truth keypoints");
    }
    const PckCount c = pck_frame(p, it->second, alpha);
    pooled.correct += c.correct;
    pooled.total += c.total;
    FrameScore score;
    score.frame_index = index;
    score.pck = c.value();
    report.frames.push_back(score);
  }
  report.summarize();
  report.pck = pooled.value();
  return report;
}

void write_report(std::ostream& out, const EvalReport& report) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed << std::setprecision(6);
  out << "# memprop evaluation report\n";
  out << "# PCK reference size: max side of the truth keypoint bounding box\n";
  out << "mode = " << to_string(report.mode) << '\n';
  out << "frames = " << report.frames.size() << '\n';
  out << "j_mean = " << report.j_mean << '\n';
  out << "f_mean = " << report.f_mean << '\n';
  out << "jf_mean = " << report.jf_mean << '\n';
  out << "j_recall = " << report.j_recall << '\n';
  out << "f_recall = " << report.f_recall << '\n';
  out << "recall_threshold = " << kRecallThreshold << '\n';
  if (report.pck) {
    out << "pck_alpha = " << report.pck_alpha << '\n';
    out << "pck = " << *report.pck << '\n';
  }
  if (report.config) {
    out << "# config\n";
    out.flags(flags);
    out.precision(precision);
    write_config(out, *report.config);
    out << std::fixed << std::setprecision(6);
  }
  out << "# frame j f pck ms\n";
  for (const FrameScore& s : report.frames) {
    out << "frame " << s.frame_index << ' ' << s.j << ' ' << s.f << ' ';
    if (s.pck) {
      out << *s.pck;
    } else {
      out << '-';
    }
    out << ' ' << std::setprecision(2) << s.milliseconds << std::setprecision(6) << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace memprop
