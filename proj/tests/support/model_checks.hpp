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

// Model-based checks shared by the unit tests and the acceptance binary.
// Each returns an empty string on success, otherwise a description.

#include <algorithm>
#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "memprop/memory.hpp"
#include "memprop/prediction.hpp"
#include "oracles.hpp"

namespace oracle {

inline memprop::FrameRecord make_record(int frame, memprop::FeatureMap features,
                                        memprop::NormalizedPoint peak = {}) {
  memprop::FrameRecord r;
  r.frame_index = frame;
  r.features = std::move(features);
  r.labels = memprop::LabelField(1, 1, 2, memprop::LabelKind::mask_onehot, {1.0, 0.0});
  r.color = memprop::LabelField(1, 1, 1, memprop::LabelKind::color_a_channel, {0.5});
  r.peak = peak;
  return r;
}

inline memprop::LabelField binary_mask(const std::vector<int>& fg) {
  return memprop::one_hot(fg, 1, static_cast<int>(fg.size()), 2);
}

inline std::vector<int> frames_of(const std::vector<memprop::FrameRecord>& bank) {
  std::vector<int> out;
  for (const auto& r : bank) out.push_back(r.frame_index);
  return out;
}

// Random short-term admissions, long-term admissions and prunes against a
// plain model: a FIFO queue for short-term memory and an FID-max rule with
// frame 0 pinned for long-term memory.
inline std::string memory_model_check(std::uint64_t seed, int steps) {
  using namespace memprop;
  Rng rng(seed);
  MemoryConfig c;
  c.short_capacity = uniform_int(rng, 1, 5);
  c.long_capacity = uniform_int(rng, 1, 4);
  c.long_min_gap = uniform_int(rng, 1, 6);
  c.beta = 0.3;
  c.gamma = 0.5;
  MemoryBanks banks(c);

  std::vector<FeatureMap> feats;
  auto features_for = [&](int frame) -> const FeatureMap& {
    while (static_cast<int>(feats.size()) <= frame) {
      feats.push_back(random_map(rng, 3, 3, 2, -3.0, 3.0));
    }
    return feats[frame];
  };
  auto fid_victim = [&](const std::vector<int>& bank, const FeatureMap& query) {
    std::optional<int> victim;
    double worst = -1.0;
    for (int f : bank) {
      if (f == 0) continue;
      const double d = fid(query, features_for(f));
      if (d > worst + 1e-9) {
        worst = d;
        victim = f;
      }
    }
    return victim;
  };

  std::deque<int> short_model;
  std::vector<int> long_model;
  banks.seed(make_record(0, features_for(0)));
  short_model.push_back(0);
  long_model.push_back(0);

  int next_frame = 1;
  for (int step = 0; step < steps; ++step) {
    std::ostringstream where;
    where << "seed " << seed << " step " << step << ": ";
    const int op = uniform_int(rng, 0, 2);
    const FeatureMap query = random_map(rng, 3, 3, 2);
    if (op == 0) {
      const int frame =
          uniform_int(rng, 0, 3) == 0 ? uniform_int(rng, 0, next_frame - 1) : next_frame++;
      const NormalizedPoint peak{uniform(rng, 0, 1), uniform(rng, 0, 1)};
      const NormalizedPoint qpeak{uniform(rng, 0, 1), uniform(rng, 0, 1)};
      const auto got =
          banks.try_admit_short_term(make_record(frame, features_for(frame), peak), qpeak, query);
      const bool dup =
          std::find(short_model.begin(), short_model.end(), frame) != short_model.end();
      const bool close = std::hypot(peak.x - qpeak.x, peak.y - qpeak.y) < c.beta;
      if (got.admitted() != (!dup && close)) return where.str() + "short-term admission differs";
      if (got.admitted()) {
        std::optional<int> evicted;
        if (static_cast<int>(short_model.size()) == c.short_capacity) {
          evicted = short_model.front();
          short_model.pop_front();
        }
        short_model.push_back(frame);
        if (got.evicted != evicted) return where.str() + "FIFO eviction differs from the queue";
      }
    } else if (op == 1) {
      const int frame =
          uniform_int(rng, 0, 3) == 0
              ? long_model[uniform_int(rng, 0, static_cast<int>(long_model.size()) - 1)]
              : next_frame++;
      const FrameRecord q =
          make_record(frame + c.long_min_gap + uniform_int(rng, 0, 3), query);
      std::vector<int> sa(6), sb(6);
      for (int& v : sa) v = uniform_int(rng, 0, 1);
      for (int& v : sb) v = uniform_int(rng, 0, 1);
      const double iou = iou_count(std::vector<bool>(sa.begin(), sa.end()),
                                   std::vector<bool>(sb.begin(), sb.end()));
      const auto got = banks.try_admit_long_term(make_record(frame, features_for(frame)), q,
                                                 binary_mask(sa), binary_mask(sb));
      if (std::abs(got.score - iou) > 1e-12) return where.str() + "IoU score differs";
      const bool dup = std::find(long_model.begin(), long_model.end(), frame) != long_model.end();
      std::optional<int> victim;
      bool full = false;
      if (!dup && iou > c.gamma && static_cast<int>(long_model.size()) >= c.long_capacity) {
        victim = fid_victim(long_model, query);
        full = !victim;
      }
      const bool admit = !dup && iou > c.gamma && !full;
      if (got.admitted() != admit) return where.str() + "long-term admission differs";
      if (admit) {
        if (victim) {
          if (got.evicted != victim) return where.str() + "FID eviction is not the oracle maximum";
          long_model.erase(std::find(long_model.begin(), long_model.end(), *victim));
        }
        long_model.push_back(frame);
      }
    } else {
      const Bank which = uniform_int(rng, 0, 1) ? Bank::short_term : Bank::long_term;
      const auto got = banks.prune(which, query);
      if (which == Bank::short_term) {
        if (short_model.empty()) {
          if (!got.warning) return where.str() + "empty prune did not warn";
        } else {
          if (got.evicted != short_model.front()) return where.str() + "FIFO prune differs";
          short_model.pop_front();
        }
      } else {
        const auto victim = fid_victim(long_model, query);
        if (got.evicted != victim) return where.str() + "FID prune is not the oracle maximum";
        if (victim) long_model.erase(std::find(long_model.begin(), long_model.end(), *victim));
      }
    }
    const std::string problems = banks.check_invariants();
    if (!problems.empty()) return where.str() + problems;
    if (frames_of(banks.short_term()) != std::vector<int>(short_model.begin(), short_model.end())) {
      return where.str() + "short-term contents differ from the model";
    }
    if (frames_of(banks.long_term()) != long_model) {
      return where.str() + "long-term contents differ from the model";
    }
    if (!banks.contains(Bank::long_term, 0)) return where.str() + "frame 0 was evicted";
    if (static_cast<int>(banks.short_term().size()) > c.short_capacity ||
        static_cast<int>(banks.long_term().size()) > c.long_capacity) {
      return where.str() + "capacity exceeded";
    }
  }
  return {};
}

// --- label optimization ---------------------------------------------------

struct LabelInstance {
  std::vector<memprop::GridCell> cells;
  memprop::ClusterModel model;
};

// `n` cells in a row with a hand-assigned cluster each; every cluster gets
// at least one member.
inline LabelInstance make_label_instance(Rng& rng, int n, int channels, int clusters) {
  LabelInstance in;
  clusters = std::min(clusters, n);
  std::vector<int> of(n);
  for (int k = 0; k < n; ++k) of[k] = k < clusters ? k : uniform_int(rng, 0, clusters - 1);
  for (int k = 0; k < n; ++k) {
    memprop::GridCell c;
    c.id = k;
    c.col = k;
    c.center = {(k + 0.5) / n, 0.5};
    c.feature = Eigen::VectorXd(channels);
    for (int j = 0; j < channels; ++j) c.feature[j] = uniform(rng, -2.0, 2.0) + 3.0 * of[k];
    in.cells.push_back(c);
  }
  in.model.clusters.resize(clusters);
  for (int i = 0; i < clusters; ++i) {
    auto& cl = in.model.clusters[i];
    cl.mu_f = Eigen::VectorXd::Zero(channels);
    for (int k = 0; k < n; ++k) {
      if (of[k] != i) continue;
      cl.member_ids.push_back(k);
      cl.mu_f += in.cells[k].feature;
    }
    cl.mu_f /= static_cast<double>(cl.member_ids.size());
  }
  in.model.grid_rows = 1;
  in.model.grid_cols = n;
  return in;
}

// The objective written over ordered cell pairs.
inline double label_objective_pairs(const std::vector<memprop::GridCell>& cells,
                                    const memprop::ClusterModel& model,
                                    const memprop::LabelSet& labels, double zeta) {
  int max_id = -1;
  for (const auto& c : cells) max_id = std::max(max_id, c.id);
  const auto of = model.assignment(max_id + 1);
  std::vector<Eigen::VectorXd> m(model.size());
  std::vector<int> count(model.size(), 0);
  for (const auto& cell : cells) {
    const int i = of[cell.id];
    if (i < 0) continue;
    if (count[i]++ == 0) m[i] = Eigen::VectorXd::Zero(cell.feature.size());
    m[i] += cell.feature + labels.labels[cell.id];
  }
  for (int i = 0; i < model.size(); ++i) {
    if (count[i] > 0) m[i] /= count[i];
  }
  double fit = 0.0, spread = 0.0;
  for (const auto& a : cells) {
    const int ia = of[a.id];
    if (ia < 0) continue;
    fit += (labels.labels[a.id] - model.clusters[ia].mu_f).norm();
    for (const auto& b : cells) {
      const int ib = of[b.id];
      if (ib < 0 || a.id == b.id) continue;
      spread += (m[ia] - m[ib]).norm();
    }
  }
  return fit - zeta * spread;
}

inline std::vector<Eigen::VectorXd> fd_gradient(const std::vector<memprop::GridCell>& cells,
                                                const memprop::ClusterModel& model,
                                                const memprop::LabelSet& labels, double zeta,
                                                double h = 1e-6) {
  std::vector<Eigen::VectorXd> g;
  for (std::size_t k = 0; k < labels.labels.size(); ++k) {
    Eigen::VectorXd gk(labels.labels[k].size());
    for (Eigen::Index j = 0; j < gk.size(); ++j) {
      memprop::LabelSet plus = labels, minus = labels;
      plus.labels[k][j] += h;
      minus.labels[k][j] -= h;
      gk[j] = (label_objective_pairs(cells, model, plus, zeta) -
               label_objective_pairs(cells, model, minus, zeta)) /
              (2 * h);
    }
    g.push_back(gk);
  }
  return g;
}

inline double relative_gap(const std::vector<Eigen::VectorXd>& got,
                           const std::vector<Eigen::VectorXd>& want) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k) {
    diff += (got[k] - want[k]).squaredNorm();
    norm += want[k].squaredNorm();
  }
  return std::sqrt(diff) / std::max(std::sqrt(norm), 1e-9);
}

}  // namespace oracle
