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

#include "memprop/builtin_features.hpp"
#include "memprop/color.hpp"
#include "memprop/errors.hpp"
#include "oracles.hpp"

using namespace memprop;

namespace {

RgbImage fill(int h, int w, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto* p = img.pixel(y, x);
      p[0] = r;
      p[1] = g;
      p[2] = b;
    }
  }
  return img;
}

}  // namespace

TEST(Color, NeutralAxisAndSign) {
  const Lab gray = srgb_to_lab(128, 128, 128);
  EXPECT_NEAR(gray.a, 0.0, 1e-3);
  EXPECT_NEAR(rescale_a(gray.a), 0.5, 1e-5);
  EXPECT_GT(srgb_to_lab(255, 0, 0).a, srgb_to_lab(0, 255, 0).a);
}

TEST(Color, ReferenceValues) {
  // Published D65 CIELAB coordinates of the sRGB primaries.
  const Lab red = srgb_to_lab(255, 0, 0);
  EXPECT_NEAR(red.l, 53.24, 0.5);
  EXPECT_NEAR(red.a, 80.09, 0.5);
  EXPECT_NEAR(red.b, 67.20, 0.5);
  const Lab green = srgb_to_lab(0, 255, 0);
  EXPECT_NEAR(green.a, -86.18, 0.5);
  const Lab white = srgb_to_lab(255, 255, 255);
  EXPECT_NEAR(white.l, 100.0, 0.01);
}

TEST(Color, AChannelField) {
  const LabelField a = rgb_to_lab_a_channel(fill(2, 3, 255, 0, 0));
  EXPECT_EQ(a.kind(), LabelKind::color_a_channel);
  EXPECT_TRUE(a.satisfies_invariants());
  for (double v : a.data()) EXPECT_NEAR(v, rescale_a(srgb_to_lab(255, 0, 0).a), 1e-12);
  EXPECT_THROW(rgb_to_lab_a_channel(RgbImage{}), ValidationError);
}

TEST(BuiltinFeatures, UniformFrameHasNoSpreadOrGradient) {
  const FeatureMap raw = patch_descriptors(fill(16, 12, 30, 140, 90), {4});
  ASSERT_EQ(raw.height(), 4);
  ASSERT_EQ(raw.width(), 3);
  ASSERT_EQ(raw.channels(), kBuiltinChannels);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 3; ++c) {
      for (int k = 3; k < kBuiltinChannels; ++k) EXPECT_EQ(raw.at(r, c, k), 0.0);
    }
  }
  const FeatureMap standardized = builtin_features(fill(16, 12, 30, 140, 90), {4});
  for (double v : standardized.data()) EXPECT_EQ(v, 0.0);
}

TEST(BuiltinFeatures, DeterministicAndValidated) {
  oracle::Rng rng(1);
  RgbImage img(12, 12);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(oracle::uniform_int(rng, 0, 255));
  EXPECT_EQ(builtin_features(img, {4}), builtin_features(img, {4}));
  EXPECT_THROW(builtin_features(fill(3, 8, 0, 0, 0), {4}), ValidationError);
  EXPECT_THROW(builtin_features(img, {0}), ValidationError);
}

TEST(BuiltinFeatures, VerticalEdgeFillsHorizontalGradientBin) {
  RgbImage img = fill(8, 8, 20, 20, 20);
  for (int y = 0; y < 8; ++y) {
    for (int x = 4; x < 8; ++x) {
      auto* p = img.pixel(y, x);
      p[0] = p[1] = p[2] = 220;
    }
  }
  const FeatureMap raw = patch_descriptors(img, {4});
  const double dark = srgb_to_lab(20, 20, 20).l;
  const double light = srgb_to_lab(220, 220, 220).l;
  auto lum = [&](int x) { return std::clamp(x, 0, 7) < 4 ? dark : light; };
  for (int pc = 0; pc < 2; ++pc) {
    double want = 0.0;
    for (int y = 0; y < 4; ++y) {
      for (int x = pc * 4; x < pc * 4 + 4; ++x) want += std::abs(0.5 * (lum(x + 1) - lum(x - 1)));
    }
    EXPECT_NEAR(raw.at(0, pc, 6), want / 16.0, 1e-9);
    for (int k = 7; k < 10; ++k) EXPECT_EQ(raw.at(0, pc, k), 0.0);
  }
}

TEST(BuiltinFeatures, StandardizedChannelsHaveUnitSpread) {
  oracle::Rng rng(2);
  FeatureMap m = oracle::random_map(rng, 5, 4, 3, -10.0, 30.0);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 4; ++c) m.at(r, c, 2) = 7.0;
  }
  const FeatureMap s = standardize_channels(m);
  for (int k = 0; k < 2; ++k) {
    double sum = 0.0, sq = 0.0;
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 4; ++c) {
        sum += s.at(r, c, k);
        sq += s.at(r, c, k) * s.at(r, c, k);
      }
    }
    EXPECT_NEAR(sum / 20.0, 0.0, 1e-12);
    EXPECT_NEAR(sq / 20.0, 1.0, 1e-12);
  }
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 4; ++c) EXPECT_EQ(s.at(r, c, 2), 0.0);
  }
}
