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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "memprop/feature_core.hpp"
#include "memprop/feature_map.hpp"
#include "memprop/label_field.hpp"

namespace memprop {

struct FrameRecord {
  int frame_index = 0;
  FeatureMap features;
  LabelField labels;  // propagated payload (mask, heatmaps or a-channel)
  LabelField color;   // observed a-channel at feature resolution
  NormalizedPoint peak;
  std::int64_t admitted_at = 0;
};

enum class PruningPolicy { fifo, fid };
enum class Bank { short_term, long_term };

std::string_view to_string(PruningPolicy policy);
std::string_view to_string(Bank bank);
PruningPolicy parse_pruning_policy(std::string_view text);

struct MemoryConfig {
  double beta = 0.15;
  double gamma = 0.85;
  int short_capacity = 5;
  int long_capacity = 3;
  int long_min_gap = 15;
  PruningPolicy short_pruning = PruningPolicy::fifo;
  PruningPolicy long_pruning = PruningPolicy::fid;
  // Disabling the long-term bank keeps frame 0 only in short-term memory.
  bool long_term_enabled = true;

  void validate() const;
};

enum class AdmitStatus {
  admitted,
  rejected_distance,   // short-term peak test failed
  rejected_iou,        // long-term agreement test failed
  rejected_duplicate,  // frame already in the bank
  rejected_full,       // bank full and nothing evictable (all pinned)
  rejected_disabled,   // long-term bank switched off
};

std::string_view to_string(AdmitStatus status);

struct AdmitResult {
  AdmitStatus status = AdmitStatus::rejected_distance;
  std::optional<int> evicted;  // frame index removed to make room
  double score = 0.0;          // distance (short-term) or IoU (long-term)

  bool admitted() const { return status == AdmitStatus::admitted; }
};

struct PruneResult {
  std::optional<int> evicted;
  bool warning = false;  // bank was empty or fully pinned
};

/// Intersection over union of the foreground (argmax != 0) of two masks.
/// Two empty foregrounds give 1.
double mask_iou(const LabelField& a, const LabelField& b);

/// Short-term and long-term reference frame banks.
///
/// Invariants, checked by check_invariants(): sizes never exceed the
/// capacities, no frame index appears twice within a bank, and frame 0 stays
/// in the long-term bank once seeded (when that bank is enabled).
class MemoryBanks {
 public:
  explicit MemoryBanks(MemoryConfig config = {});

  const MemoryConfig& config() const { return config_; }
  const std::vector<FrameRecord>& short_term() const { return short_term_; }
  const std::vector<FrameRecord>& long_term() const { return long_term_; }
  const std::vector<FrameRecord>& bank(Bank which) const;

  bool contains(Bank which, int frame_index) const;
  bool empty() const { return short_term_.empty() && long_term_.empty(); }

  /// Places the annotated first frame in both banks unconditionally.
  void seed(const FrameRecord& first);

  /// Admits `candidate` iff its peak lies strictly closer than beta to
  /// `query_peak`. A full bank is pruned first using `query` for FID scores.
  AdmitResult try_admit_short_term(const FrameRecord& candidate,
                                   const NormalizedPoint& query_peak,
                                   const FeatureMap& query);

  /// Admits `candidate` iff the IoU of the solo reconstruction `recon_long`
  /// with the short-term reconstruction `recon_short` exceeds gamma. Both
  /// must be mask_onehot (ModeError otherwise), and the candidate must be at
  /// least long_min_gap frames older than `query` (ValidationError).
  AdmitResult try_admit_long_term(const FrameRecord& candidate,
                                  const FrameRecord& query,
                                  const LabelField& recon_short,
                                  const LabelField& recon_long);

  /// Evicts one record per the bank's policy. Frame 0 is never evicted from
  /// long-term memory. FID ties go to the oldest admission.
  PruneResult prune(Bank which, const FeatureMap& query);

  /// Empty string when all invariants hold, otherwise a description.
  std::string check_invariants() const;

  /// Line-delimited report: one line per record with bank, frame index,
  /// peak, admission ordinal and FID to `query` (if given).
  void dump(std::ostream& out, const FeatureMap* query = nullptr) const;

 private:
  std::vector<FrameRecord>& mutable_bank(Bank which);
  int capacity(Bank which) const;
  PruningPolicy policy(Bank which) const;
  bool pinned(Bank which, const FrameRecord& record) const;
  AdmitResult insert(Bank which, const FrameRecord& candidate,
                     const FeatureMap& query, double score);

  MemoryConfig config_;
  std::vector<FrameRecord> short_term_;
  std::vector<FrameRecord> long_term_;
  std::int64_t admissions_ = 0;
  bool seen_first_ = false;
};

}  // namespace memprop
