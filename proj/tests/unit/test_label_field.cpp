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

#include "memprop/errors.hpp"
#include "memprop/label_field.hpp"
#include "oracles.hpp"

using namespace memprop;

TEST(LabelField, ValidatesShapeAndValues) {
  EXPECT_THROW(LabelField(0, 2, 1, LabelKind::mask_onehot), ValidationError);
  EXPECT_THROW(LabelField(1, 2, 1, LabelKind::mask_onehot, {0.0}), ValidationError);
  EXPECT_THROW(LabelField(1, 1, 1, LabelKind::mask_onehot, {std::nan("")}),
               ValidationError);
}

TEST(LabelField, KindInvariants) {
  LabelField m(1, 2, 2, LabelKind::mask_onehot, {0.3, 0.7, 1.0, 0.0});
  EXPECT_TRUE(m.satisfies_invariants());
  m.at(0, 0, 0) = 0.5;
  EXPECT_FALSE(m.satisfies_invariants());
  EXPECT_FALSE(LabelField(1, 1, 1, LabelKind::color_a_channel, {1.5}).satisfies_invariants());
  EXPECT_FALSE(LabelField(1, 1, 1, LabelKind::keypoint_heatmap, {-0.1}).satisfies_invariants());
}

TEST(LabelField, ArgmaxPrefersLowestIndexOnTies) {
  LabelField m(1, 3, 3, LabelKind::mask_onehot,
               {0.5, 0.5, 0.0, 0.2, 0.4, 0.4, 0.0, 0.0, 1.0});
  EXPECT_EQ(m.argmax(), (std::vector<int>{0, 1, 2}));
}

TEST(OneHot, EncodesAndRejectsOutOfRange) {
  const std::vector<int> idx{0, 2, 1, 0};
  const LabelField f = one_hot(idx, 2, 2, 3);
  EXPECT_EQ(f.argmax(), idx);
  EXPECT_TRUE(f.satisfies_invariants(0.0));
  const std::vector<int> bad{0, 3, 1, 0};
  EXPECT_THROW(one_hot(bad, 2, 2, 3), ValidationError);
}

TEST(Downsample, AveragesBlocksAndKeepsSimplex) {
  oracle::Rng rng(3);
  std::vector<int> idx(8 * 12);
  for (int& v : idx) v = oracle::uniform_int(rng, 0, 2);
  const LabelField f = one_hot(idx, 8, 12, 3);
  const LabelField d = downsample(f, 4);
  ASSERT_EQ(d.height(), 2);
  ASSERT_EQ(d.width(), 3);
  EXPECT_TRUE(d.satisfies_invariants(1e-12));
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k < 3; ++k) {
        int count = 0;
        for (int y = 0; y < 4; ++y) {
          for (int x = 0; x < 4; ++x) count += idx[(r * 4 + y) * 12 + c * 4 + x] == k;
        }
        EXPECT_NEAR(d.at(r, c, k), count / 16.0, 1e-12);
      }
    }
  }
}

TEST(UpsampleBilinear, IdentityAndConstant) {
  oracle::Rng rng(5);
  LabelField f(3, 4, 2, LabelKind::keypoint_heatmap);
  for (double& v : f.data()) v = oracle::uniform(rng, 0.0, 1.0);
  EXPECT_EQ(upsample_bilinear(f, 3, 4), f);

  LabelField c(2, 2, 1, LabelKind::color_a_channel, {0.25, 0.25, 0.25, 0.25});
  const LabelField up = upsample_bilinear(c, 7, 5);
  for (double v : up.data()) EXPECT_NEAR(v, 0.25, 1e-15);
}
