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

#include "memprop/sweep.hpp"

#include <iomanip>
#include <map>
#include <ostream>

#include "memprop/errors.hpp"
#include "memprop/pipeline.hpp"
#include "memprop/report.hpp"

namespace memprop {

SweepParam parse_sweep_param(std::string_view text) {
  if (text == "beta") return SweepParam::beta;
  if (text == "gamma") return SweepParam::gamma;
  if (text == "both") return SweepParam::both;
  throw ValidationError("unknown sweep parameter '" + std::string(text) +
                        "' (expected beta, gamma or both)");
}

namespace {

SweepCell run_cell(const SequenceSource& source, const FeatureProvider& provider,
                   PipelineConfig config, const std::string& param, double value) {
  SweepCell cell;
  cell.param = param;
  cell.value = value;
  try {
    if (param == "beta") {
      config.memory.beta = value;
    } else {
      config.memory.gamma = value;
    }
    const PropagationResult result = propagate_sequence(source, provider, config);
    EvalReport report;
    if (source.mode == SequenceMode::mask) {
      std::map<int, IndexMask> pred;
      for (int i = 0; i < static_cast<int>(result.masks.size()); ++i) pred[i] = result.masks[i];
      report = evaluate_masks(pred, source.masks);
    } else if (source.mode == SequenceMode::keypoint) {
      report = evaluate_keypoints(result.keypoints, source.keypoints);
      cell.pck = report.pck.value_or(0.0);
    } else {
      throw ValidationError("color sequences carry no ground truth to sweep against");
    }
    cell.jf_mean = report.jf_mean;
    cell.j_mean = report.j_mean;
    cell.f_mean = report.f_mean;
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

std::vector<SweepCell> run_sweep(const SequenceSource& source, const PipelineConfig& base,
                                 SweepParam param) {
  base.validate();
  const FeatureProvider provider = FeatureProvider::from_config(base, source);
  std::vector<SweepCell> cells;
  if (param == SweepParam::beta || param == SweepParam::both) {
    for (double v : kBetaGrid) cells.push_back(run_cell(source, provider, base, "beta", v));
  }
  if (param == SweepParam::gamma || param == SweepParam::both) {
    for (double v : kGammaGrid) cells.push_back(run_cell(source, provider, base, "gamma", v));
  }
  return cells;
}

int best_cell(const std::vector<SweepCell>& cells, std::string_view param) {
  // Keypoint cells have no J or F and rank by PCK instead.
  auto score = [](const SweepCell& c) {
    return c.j_mean == 0.0 && c.f_mean == 0.0 ? c.pck : c.jf_mean;
  };
  int best = -1;
  for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
    const SweepCell& c = cells[i];
    if (!c.ok || c.param != param) continue;
    if (best < 0 || score(c) > score(cells[best])) best = i;
  }
  return best;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "param,value,jf_mean,j_mean,f_mean,pck,status,error\n";
  for (const SweepCell& c : cells) {
    std::string error = c.error;
    for (char& ch : error) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    out << c.param << ',' << std::fixed << std::setprecision(2) << c.value << ','
        << std::setprecision(6) << c.jf_mean << ',' << c.j_mean << ',' << c.f_mean << ','
        << c.pck << ',' << (c.ok ? "ok" : "failed") << ',' << error << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace memprop
