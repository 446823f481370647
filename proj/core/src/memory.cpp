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

#include "memprop/memory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "memprop/errors.hpp"
#include "memprop/fid.hpp"

namespace memprop {

std::string_view to_string(PruningPolicy policy) {
  return policy == PruningPolicy::fifo ? "fifo" : "fid";
}

std::string_view to_string(Bank bank) {
  return bank == Bank::short_term ? "short" : "long";
}

PruningPolicy parse_pruning_policy(std::string_view text) {
  if (text == "fifo") return PruningPolicy::fifo;
  if (text == "fid") return PruningPolicy::fid;
  throw ValidationError("unknown pruning policy '" + std::string(text) + "'");
}

std::string_view to_string(AdmitStatus status) {
  switch (status) {
    case AdmitStatus::admitted: return "admitted";
    case AdmitStatus::rejected_distance: return "rejected_distance";
    case AdmitStatus::rejected_iou: return "rejected_iou";
    case AdmitStatus::rejected_duplicate: return "rejected_duplicate";
    case AdmitStatus::rejected_full: return "rejected_full";
    case AdmitStatus::rejected_disabled: return "rejected_disabled";
  }
  return "unknown";
}

void MemoryConfig::validate() const {
  if (!(beta > 0.0 && beta <= std::sqrt(2.0))) {
    throw ValidationError("beta must lie in (0, sqrt(2)]");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("gamma must lie in (0, 1]");
  if (short_capacity < 1 || long_capacity < 1) {
    throw ValidationError("bank capacities must be at least 1");
  }
  if (long_min_gap < 1) throw ValidationError("long_min_gap must be at least 1");
}

double mask_iou(const LabelField& a, const LabelField& b) {
  if (a.kind() != LabelKind::mask_onehot || b.kind() != LabelKind::mask_onehot) {
    throw ModeError("mask IoU needs mask_onehot labels");
  }
  if (!a.same_shape(b)) throw ValidationError("mask IoU needs masks of equal shape");
  const auto ca = a.argmax();
  const auto cb = b.argmax();
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t p = 0; p < ca.size(); ++p) {
    const bool fa = ca[p] != 0;
    const bool fb = cb[p] != 0;
    inter += (fa && fb) ? 1 : 0;
    uni += (fa || fb) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

MemoryBanks::MemoryBanks(MemoryConfig config) : config_(config) { config_.validate(); }

const std::vector<FrameRecord>& MemoryBanks::bank(Bank which) const {
  return which == Bank::short_term ? short_term_ : long_term_;
}

std::vector<FrameRecord>& MemoryBanks::mutable_bank(Bank which) {
  return which == Bank::short_term ? short_term_ : long_term_;
}

int MemoryBanks::capacity(Bank which) const {
  return which == Bank::short_term ? config_.short_capacity : config_.long_capacity;
}

PruningPolicy MemoryBanks::policy(Bank which) const {
  return which == Bank::short_term ? config_.short_pruning : config_.long_pruning;
}

bool MemoryBanks::pinned(Bank which, const FrameRecord& record) const {
  return which == Bank::long_term && record.frame_index == 0;
}

bool MemoryBanks::contains(Bank which, int frame_index) const {
  const auto& records = bank(which);
  return std::any_of(records.begin(), records.end(), [&](const FrameRecord& r) {
    return r.frame_index == frame_index;
  });
}

void MemoryBanks::seed(const FrameRecord& first) {
  if (first.frame_index < 0) throw ValidationError("frame index must be non-negative");
  if (!contains(Bank::short_term, first.frame_index)) {
    FrameRecord r = first;
    r.admitted_at = admissions_++;
    short_term_.push_back(std::move(r));
  }
  if (first.frame_index == 0) seen_first_ = true;
  if (config_.long_term_enabled && !contains(Bank::long_term, first.frame_index)) {
    FrameRecord r = first;
    r.admitted_at = admissions_++;
    long_term_.push_back(std::move(r));
  }
}

AdmitResult MemoryBanks::insert(Bank which, const FrameRecord& candidate,
                                const FeatureMap& query, double score) {
  AdmitResult result;
  result.score = score;
  auto& records = mutable_bank(which);
  if (static_cast<int>(records.size()) >= capacity(which)) {
    const PruneResult pruned = prune(which, query);
    if (!pruned.evicted) {
      result.status = AdmitStatus::rejected_full;
      return result;
    }
    result.evicted = pruned.evicted;
  }
  FrameRecord r = candidate;
  r.admitted_at = admissions_++;
  records.push_back(std::move(r));
  result.status = AdmitStatus::admitted;
  return result;
}

AdmitResult MemoryBanks::try_admit_short_term(const FrameRecord& candidate,
                                              const NormalizedPoint& query_peak,
                                              const FeatureMap& query) {
  AdmitResult result;
  result.score = normalized_distance(query_peak, candidate.peak);
  if (contains(Bank::short_term, candidate.frame_index)) {
    result.status = AdmitStatus::rejected_duplicate;
    return result;
  }
  if (!(result.score < config_.beta)) {
    result.status = AdmitStatus::rejected_distance;
    return result;
  }
  return insert(Bank::short_term, candidate, query, result.score);
}

AdmitResult MemoryBanks::try_admit_long_term(const FrameRecord& candidate,
                                             const FrameRecord& query,
                                             const LabelField& recon_short,
                                             const LabelField& recon_long) {
  AdmitResult result;
  if (!config_.long_term_enabled) {
    result.status = AdmitStatus::rejected_disabled;
    return result;
  }
  if (recon_short.kind() != LabelKind::mask_onehot ||
      recon_long.kind() != LabelKind::mask_onehot) {
    throw ModeError("long-term admission is only defined for mask labels");
  }
  if (query.frame_index - candidate.frame_index < config_.long_min_gap) {
    throw ValidationError("long-term candidate " + std::to_string(candidate.frame_index) +
                          " is closer than long_min_gap to query " +
                          std::to_string(query.frame_index));
  }
  result.score = mask_iou(recon_long, recon_short);
  if (contains(Bank::long_term, candidate.frame_index)) {
    result.status = AdmitStatus::rejected_duplicate;
    return result;
  }
  if (!(result.score > config_.gamma)) {
    result.status = AdmitStatus::rejected_iou;
    return result;
  }
  return insert(Bank::long_term, candidate, query.features, result.score);
}

PruneResult MemoryBanks::prune(Bank which, const FeatureMap& query) {
  PruneResult result;
  auto& records = mutable_bank(which);
  // Records are kept in admission order, so the first hit on a tie is the
  // oldest.
  int victim = -1;
  if (policy(which) == PruningPolicy::fifo) {
    for (int i = 0; i < static_cast<int>(records.size()); ++i) {
      if (pinned(which, records[i])) continue;
      if (victim < 0 || records[i].admitted_at < records[victim].admitted_at) victim = i;
    }
  } else {
    double worst = -1.0;
    for (int i = 0; i < static_cast<int>(records.size()); ++i) {
      if (pinned(which, records[i])) continue;
      const double score = fid_distance(query, records[i].features);
      if (score > worst) {
        worst = score;
        victim = i;
      }
    }
  }
  if (victim < 0) {
    result.warning = true;
    return result;
  }
  result.evicted = records[victim].frame_index;
  records.erase(records.begin() + victim);
  return result;
}

std::string MemoryBanks::check_invariants() const {
  std::ostringstream problems;
  for (Bank which : {Bank::short_term, Bank::long_term}) {
    const auto& records = bank(which);
    if (static_cast<int>(records.size()) > capacity(which)) {
      problems << to_string(which) << " bank holds " << records.size()
               << " records over capacity " << capacity(which) << "; ";
    }
    std::set<int> seen;
    for (const auto& r : records) {
      if (!seen.insert(r.frame_index).second) {
        problems << to_string(which) << " bank repeats frame " << r.frame_index << "; ";
      }
    }
  }
  if (config_.long_term_enabled && seen_first_ && !contains(Bank::long_term, 0)) {
    problems << "frame 0 missing from the long-term bank; ";
  }
  return problems.str();
}

void MemoryBanks::dump(std::ostream& out, const FeatureMap* query) const {
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(6);
  for (Bank which : {Bank::short_term, Bank::long_term}) {
    for (const auto& r : bank(which)) {
      out << "bank=" << to_string(which) << " frame=" << r.frame_index
          << " peak=" << r.peak.x << ',' << r.peak.y << " admitted_at=" << r.admitted_at;
      if (query != nullptr) out << " fid=" << fid_distance(*query, r.features);
      out << '\n';
    }
  }
  out.flags(flags);
}

}  // namespace memprop
