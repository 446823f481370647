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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "memprop/clustering.hpp"
#include "memprop/errors.hpp"
#include "memprop/io.hpp"
#include "memprop/metrics.hpp"
#include "memprop/pipeline.hpp"
#include "memprop/report.hpp"
#include "memprop/sweep.hpp"
#include "memprop/synthetic.hpp"

namespace fs = std::filesystem;
using namespace memprop;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

PipelineConfig config_from(const std::string& path) {
  return path.empty() ? PipelineConfig{} : load_config(path);
}

std::array<std::uint8_t, 3> palette_color(int index) {
  std::array<std::uint8_t, 3> rgb{0, 0, 0};
  for (int bit = 0; bit < 8; ++bit) {
    for (int ch = 0; ch < 3; ++ch) {
      rgb[ch] |= static_cast<std::uint8_t>(((index >> (3 * bit + ch)) & 1) << (7 - bit));
    }
  }
  return rgb;
}

RgbImage overlay(const RgbImage& frame, const IndexMask& mask) {
  RgbImage out = frame;
  for (int r = 0; r < frame.height; ++r) {
    for (int c = 0; c < frame.width; ++c) {
      const int k = mask.at(r, c);
      if (k == 0) continue;
      const auto color = palette_color(k);
      std::uint8_t* p = out.pixel(r, c);
      for (int ch = 0; ch < 3; ++ch) p[ch] = static_cast<std::uint8_t>((p[ch] + color[ch]) / 2);
    }
  }
  return out;
}

std::vector<unsigned char> to_gray(const LabelField& field) {
  std::vector<unsigned char> gray(field.pixels());
  for (int i = 0; i < field.pixels(); ++i) {
    gray[i] = static_cast<unsigned char>(std::lround(std::clamp(field.data()[i], 0.0, 1.0) * 255));
  }
  return gray;
}

struct RunOptions {
  std::string sequence;
  std::string config;
  std::string out;
  bool overlays = false;
  bool dump_memory = false;
  bool dump_clusters = false;
};

int cmd_run(const RunOptions& opt) {
  const SequenceSource source = load_sequence(opt.sequence);
  const PipelineConfig config = config_from(opt.config);
  const fs::path out = opt.out;
  make_dir(out);

  std::ofstream memory_log;
  if (opt.dump_memory) memory_log = open_output(out / "memory.txt");
  if (opt.dump_clusters) make_dir(out / "clusters");

  const FeatureProvider provider = FeatureProvider::from_config(config, source);
  auto observer = [&](const PropagationState& state) {
    const FrameDiagnostics& d = state.diagnostics.back();
    if (opt.dump_memory) {
      memory_log << "# frame " << d.frame_index << " loss_nr=" << d.loss_nr
                 << " loss_pr=" << d.loss_pr << '\n';
      state.banks.dump(memory_log, state.pending ? &state.pending->features : nullptr);
    }
    if (opt.dump_clusters && d.grid_rows > 0) {
      char name[32];
      std::snprintf(name, sizeof name, "%05d.png", d.frame_index);
      write_gray_png(out / "clusters" / name, d.grid_rows, d.grid_cols,
                     cluster_index_image(d.query_clusters, d.num_clusters));
    }
  };
  const PropagationResult result = propagate_sequence(source, provider, config, observer);

  EvalReport report;
  report.mode = source.mode;
  switch (source.mode) {
    case SequenceMode::mask: {
      make_dir(out / "masks");
      std::map<int, IndexMask> pred;
      for (int t = 0; t < source.size(); ++t) {
        write_index_png(out / "masks" / (source.frame_names[t] + ".png"), result.masks[t]);
        pred[t] = result.masks[t];
      }
      if (source.masks.size() > 1) report = evaluate_masks(pred, source.masks);
      if (opt.overlays) {
        make_dir(out / "overlays");
        for (int t = 0; t < source.size(); ++t) {
          write_rgb_png(out / "overlays" / (source.frame_names[t] + ".png"),
                        overlay(source.frames[t], result.masks[t]));
        }
      }
      break;
    }
    case SequenceMode::keypoint:
      write_keypoints_file(out / "keypoints.txt", result.keypoints);
      if (source.keypoints.size() > 1) report = evaluate_keypoints(result.keypoints, source.keypoints);
      break;
    case SequenceMode::color:
      make_dir(out / "color");
      for (int t = 0; t < source.size(); ++t) {
        const LabelField& a = result.color[t];
        write_gray_png(out / "color" / (source.frame_names[t] + ".png"), a.height(), a.width(),
                       to_gray(a));
      }
      break;
  }
  report.mode = source.mode;
  report.config = config;
  for (const FrameDiagnostics& d : result.state.diagnostics) {
    bool found = false;
    for (FrameScore& s : report.frames) {
      if (s.frame_index == d.frame_index) {
        s.milliseconds = d.milliseconds;
        found = true;
      }
    }
    if (!found && source.mode == SequenceMode::color) {
      FrameScore s;
      s.frame_index = d.frame_index;
      s.milliseconds = d.milliseconds;
      report.frames.push_back(s);
    }
  }
  if (source.mode != SequenceMode::color) {
    const auto pck = report.pck;
    report.summarize();
    report.pck = pck;
  }
  auto report_out = open_output(out / "report.txt");
  write_report(report_out, report);
  std::cout << "frames = " << source.size() << "\njf_mean = " << report.jf_mean << '\n';
  if (report.pck) std::cout << "pck = " << *report.pck << '\n';
  return 0;
}

std::map<int, IndexMask> read_mask_dir(const fs::path& dir) {
  const fs::path masks = fs::is_directory(dir / "masks") ? dir / "masks" : dir;
  if (!fs::is_directory(masks)) throw IoError("no mask directory at " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(masks)) {
    if (entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::map<int, IndexMask> out;
  for (int i = 0; i < static_cast<int>(files.size()); ++i) out[i] = read_index_png(files[i]);
  return out;
}

int cmd_eval(const std::string& pred_dir, const std::string& truth_dir,
             const std::string& mode_text, const std::string& out_path) {
  const SequenceMode mode = parse_sequence_mode(mode_text);
  EvalReport report;
  if (mode == SequenceMode::mask) {
    const auto truth = read_mask_dir(truth_dir);
    if (truth.empty()) throw ValidationError("no ground-truth masks in " + truth_dir);
    report = evaluate_masks(read_mask_dir(pred_dir), truth);
  } else if (mode == SequenceMode::keypoint) {
    const fs::path truth = fs::path(truth_dir) / "keypoints.txt";
    if (!fs::exists(truth)) throw ValidationError("missing ground truth " + truth.string());
    report = evaluate_keypoints(read_keypoints_file(fs::path(pred_dir) / "keypoints.txt"),
                                read_keypoints_file(truth));
  } else {
    throw ValidationError("eval supports mask and keypoint modes");
  }
  if (out_path.empty()) {
    write_report(std::cout, report);
  } else {
    auto out = open_output(out_path);
    write_report(out, report);
  }
  return 0;
}

int cmd_sweep(const std::string& sequence, const std::string& config_path,
              const std::string& param, const std::string& out_path) {
  const SweepParam which = parse_sweep_param(param);
  const SequenceSource source = load_sequence(sequence);
  const auto cells = run_sweep(source, config_from(config_path), which);
  auto out = open_output(out_path);
  write_sweep_csv(out, cells);
  for (const char* name : {"beta", "gamma"}) {
    const int best = best_cell(cells, name);
    if (best >= 0) {
      std::cout << "best " << name << " = " << cells[best].value
                << " (jf_mean " << cells[best].jf_mean << ")\n";
    }
  }
  int failed = 0;
  for (const auto& c : cells) failed += !c.ok;
  if (failed > 0) std::cerr << failed << " sweep cell(s) failed; see " << out_path << '\n';
  return 0;
}

int cmd_fixture(const std::string& kind, const std::string& out, std::uint64_t seed,
                int frames) {
  SequenceSource source;
  if (kind == "square") {
    TranslatingSquareParams p;
    if (frames > 0) p.frames = frames;
    source = translating_square(p);
  } else if (kind == "static") {
    source = static_sequence(frames > 0 ? frames : 6);
  } else if (kind == "occlusion") {
    OcclusionParams p;
    p.seed = seed;
    if (frames > 0) p.frames = frames;
    source = occlusion_sequence(p);
  } else if (kind == "keypoints") {
    TranslatingSquareParams p;
    if (frames > 0) p.frames = frames;
    source = translating_square(p);
    source.mode = SequenceMode::keypoint;
    source.masks.clear();
  } else {
    throw ValidationError("unknown fixture '" + kind +
                          "' (expected square, static, occlusion or keypoints)");
  }
  save_sequence(out, source);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label propagation with short- and long-term memory"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Propagate the first frame's labels through a sequence");
  run_cmd->add_option("--sequence", run.sequence, "Sequence directory")->required();
  run_cmd->add_option("--config", run.config, "key = value configuration file");
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_flag("--overlays", run.overlays, "Write mask overlays");
  run_cmd->add_flag("--dump-memory", run.dump_memory, "Write the bank state per frame");
  run_cmd->add_flag("--dump-clusters", run.dump_clusters, "Write grid cluster maps");

  std::string pred, truth, mode = "mask", eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against ground truth");
  eval_cmd->add_option("--pred", pred, "Prediction directory")->required();
  eval_cmd->add_option("--truth", truth, "Ground-truth directory")->required();
  eval_cmd->add_option("--mode", mode, "mask or keypoint")
      ->check(CLI::IsMember({"mask", "keypoint"}));
  eval_cmd->add_option("--out", eval_out, "Report file (default: stdout)");

  std::string sweep_seq, sweep_config, param = "both", sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid the memory thresholds");
  sweep_cmd->add_option("--sequence", sweep_seq, "Sequence directory")->required();
  sweep_cmd->add_option("--config", sweep_config, "Base configuration file");
  sweep_cmd->add_option("--param", param, "beta, gamma or both")
      ->check(CLI::IsMember({"beta", "gamma", "both"}));
  sweep_cmd->add_option("--out", sweep_out, "CSV output")->required();

  std::string kind = "square", fixture_out;
  std::uint64_t seed = 1;
  int frames = 0;
  auto* fixture_cmd = app.add_subcommand("fixture", "Write a synthetic sequence");
  fixture_cmd->add_option("--kind", kind, "square, static, occlusion or keypoints");
  fixture_cmd->add_option("--out", fixture_out, "Sequence directory")->required();
  fixture_cmd->add_option("--seed", seed, "Occlusion fixture seed");
  fixture_cmd->add_option("--frames", frames, "Frame count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*eval_cmd) return cmd_eval(pred, truth, mode, eval_out);
    if (*sweep_cmd) return cmd_sweep(sweep_seq, sweep_config, param, sweep_out);
    if (*fixture_cmd) return cmd_fixture(kind, fixture_out, seed, frames);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
