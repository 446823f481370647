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

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "memprop/errors.hpp"
#include "memprop/memory.hpp"
#include "model_checks.hpp"

using namespace memprop;

namespace {

FrameRecord record(int frame, FeatureMap features = FeatureMap(3, 3, 2),
                   NormalizedPoint peak = {}) {
  return oracle::make_record(frame, std::move(features), peak);
}

using oracle::binary_mask;
using oracle::frames_of;

}  // namespace

TEST(MemoryConfig, Validation) {
  MemoryConfig c;
  EXPECT_NO_THROW(c.validate());
  c.beta = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.gamma = 1.5;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.short_capacity = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.long_min_gap = 0;
  EXPECT_THROW(MemoryBanks{c}, ValidationError);
}

TEST(MaskIou, Examples) {
  EXPECT_DOUBLE_EQ(mask_iou(binary_mask({1, 1, 0}), binary_mask({1, 1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(mask_iou(binary_mask({0, 0, 0}), binary_mask({0, 0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(mask_iou(binary_mask({1, 1, 1, 1, 0, 0, 0, 0, 0}),
                            binary_mask({0, 0, 1, 1, 1, 0, 0, 0, 0})),
                   0.4);
  const LabelField color(1, 3, 1, LabelKind::color_a_channel);
  EXPECT_THROW(mask_iou(color, color), ModeError);
}

TEST(ShortTerm, StrictDistanceThreshold) {
  MemoryBanks banks;
  banks.seed(record(0));
  const FeatureMap q(3, 3, 2);
  EXPECT_TRUE(banks.try_admit_short_term(record(1, q, {0.4, 0.4}), {0.4, 0.4}, q).admitted());
  const auto at_beta = banks.try_admit_short_term(record(2, q, {0.15, 0.0}), {0.0, 0.0}, q);
  EXPECT_EQ(at_beta.status, AdmitStatus::rejected_distance);
  EXPECT_DOUBLE_EQ(at_beta.score, 0.15);
  EXPECT_EQ(banks.try_admit_short_term(record(1), {}, q).status,
            AdmitStatus::rejected_duplicate);
}

TEST(ShortTerm, FifoKeepsMostRecent) {
  MemoryConfig c;
  c.short_capacity = 5;
  MemoryBanks banks(c);
  const FeatureMap q(3, 3, 2);
  std::vector<int> evicted;
  for (int f = 1; f <= 7; ++f) {
    const auto r = banks.try_admit_short_term(record(f), {}, q);
    ASSERT_TRUE(r.admitted());
    if (r.evicted) evicted.push_back(*r.evicted);
  }
  EXPECT_EQ(frames_of(banks.short_term()), (std::vector<int>{3, 4, 5, 6, 7}));
  EXPECT_EQ(evicted, (std::vector<int>{1, 2}));
}

TEST(LongTerm, IouGateAndErrors) {
  MemoryBanks banks;
  banks.seed(record(0));
  const FrameRecord query = record(40);
  const auto same = binary_mask({1, 1, 0, 0});
  EXPECT_TRUE(banks.try_admit_long_term(record(20), query, same, same).admitted());

  const auto a = binary_mask({1, 1, 0, 0});
  const auto b = binary_mask({0, 0, 1, 1});
  EXPECT_EQ(banks.try_admit_long_term(record(21), query, a, b).status,
            AdmitStatus::rejected_iou);

  // 7 shared foreground pixels out of a 10-pixel union.
  const auto s = binary_mask({1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0});
  const auto l = binary_mask({0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0});
  const auto r = banks.try_admit_long_term(record(22), query, s, l);
  EXPECT_EQ(r.status, AdmitStatus::rejected_iou);
  EXPECT_NEAR(r.score, 0.7, 1e-12);

  const LabelField color(1, 4, 1, LabelKind::color_a_channel);
  EXPECT_THROW(banks.try_admit_long_term(record(23), query, color, color), ModeError);
  EXPECT_THROW(banks.try_admit_long_term(record(30), query, same, same), ValidationError);
  EXPECT_EQ(banks.try_admit_long_term(record(20), query, same, same).status,
            AdmitStatus::rejected_duplicate);
}

TEST(LongTerm, DisabledBankKeepsOnlyShortTermSeed) {
  MemoryConfig c;
  c.long_term_enabled = false;
  MemoryBanks banks(c);
  banks.seed(record(0));
  EXPECT_TRUE(banks.long_term().empty());
  EXPECT_EQ(frames_of(banks.short_term()), std::vector<int>{0});
  const auto m = binary_mask({1, 0});
  EXPECT_EQ(banks.try_admit_long_term(record(20), record(40), m, m).status,
            AdmitStatus::rejected_disabled);
  EXPECT_EQ(banks.check_invariants(), "");
}

TEST(Prune, FifoFidAndPinning) {
  oracle::Rng rng(5);
  const FeatureMap query = oracle::random_map(rng, 4, 4, 2);

  MemoryConfig c;
  c.short_capacity = 3;
  MemoryBanks fifo(c);
  for (int f : {3, 5, 8}) fifo.try_admit_short_term(record(f, query), {}, query);
  EXPECT_EQ(fifo.prune(Bank::short_term, query).evicted, 3);

  c.short_pruning = PruningPolicy::fid;
  MemoryBanks fid(c);
  const FeatureMap noise = oracle::random_map(rng, 4, 4, 2, -20.0, 20.0);
  fid.try_admit_short_term(record(1, query), {}, query);
  fid.try_admit_short_term(record(2, noise), {}, query);
  fid.try_admit_short_term(record(3, query), {}, query);
  EXPECT_EQ(fid.prune(Bank::short_term, query).evicted, 2);

  MemoryBanks pinned;  // long bank: capacity 3, fid
  const FeatureMap far = oracle::random_map(rng, 4, 4, 2, 50.0, 60.0);
  const FeatureMap mid = oracle::random_map(rng, 4, 4, 2, 5.0, 6.0);
  pinned.seed(record(0, far));
  const auto m = binary_mask({1, 0});
  ASSERT_TRUE(pinned.try_admit_long_term(record(17, mid), record(40, query), m, m).admitted());
  ASSERT_TRUE(pinned.try_admit_long_term(record(30, query), record(60, query), m, m).admitted());
  EXPECT_EQ(frames_of(pinned.long_term()), (std::vector<int>{0, 17, 30}));
  EXPECT_EQ(pinned.prune(Bank::long_term, query).evicted, 17);
  EXPECT_EQ(pinned.prune(Bank::long_term, query).evicted, 30);
  const auto last = pinned.prune(Bank::long_term, query);
  EXPECT_FALSE(last.evicted);
  EXPECT_TRUE(last.warning);
  EXPECT_EQ(frames_of(pinned.long_term()), std::vector<int>{0});

  MemoryBanks empty;
  EXPECT_TRUE(empty.prune(Bank::short_term, query).warning);
}

TEST(Prune, FidTiesGoToOldest) {
  MemoryConfig c;
  c.short_pruning = PruningPolicy::fid;
  MemoryBanks banks(c);
  const FeatureMap q(3, 3, 2);
  for (int f : {4, 2, 9}) banks.try_admit_short_term(record(f), {}, q);
  EXPECT_EQ(banks.prune(Bank::short_term, q).evicted, 4);
}

TEST(Memory, DumpListsEveryRecord) {
  MemoryBanks banks;
  banks.seed(record(0));
  std::ostringstream out;
  const FeatureMap q(3, 3, 2);
  banks.dump(out, &q);
  EXPECT_NE(out.str().find("bank=short frame=0"), std::string::npos);
  EXPECT_NE(out.str().find("bank=long frame=0"), std::string::npos);
  EXPECT_NE(out.str().find("fid="), std::string::npos);
}

TEST(Memory, RandomOperationModelCheck) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    EXPECT_EQ(oracle::memory_model_check(seed, 1000), "");
  }
}
