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

#include "memprop/fid.hpp"
#include "oracles.hpp"

using namespace memprop;

TEST(Fid, IdenticalInputsGiveZero) {
  oracle::Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const FeatureMap m = oracle::random_map(rng, 5, 6, 4);
    EXPECT_NEAR(fid_distance(m, m), 0.0, 1e-5);
  }
}

TEST(Fid, ShiftedConstantsGiveSquaredShift) {
  for (double delta : {0.1, 0.5, 2.0, 7.25}) {
    FeatureMap a(4, 4, 1), b(4, 4, 1);
    for (double& v : a.data()) v = 1.0;
    for (double& v : b.data()) v = 1.0 + delta;
    EXPECT_NEAR(fid_distance(a, b), delta * delta, 1e-4 + 1e-6);
  }
}

TEST(Fid, TwoChannelClosedForm) {
  // For 2x2 SPD covariances, tr((S_a S_b)^(1/2)) = sqrt(tr(S_a S_b) + 2 sqrt(det(S_a S_b))).
  oracle::Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const FeatureMap a = oracle::random_map(rng, 4, 5, 2);
    const FeatureMap b = oracle::random_map(rng, 3, 6, 2, -2.0, 0.5);
    auto stats = [](const FeatureMap& m, Eigen::Vector2d& mu, Eigen::Matrix2d& s) {
      const auto x = m.as_matrix();
      mu = x.colwise().mean().transpose();
      const Eigen::MatrixXd d = x.rowwise() - mu.transpose();
      s = d.transpose() * d / (m.pixels() - 1.0) + 1e-6 * Eigen::Matrix2d::Identity();
    };
    Eigen::Vector2d ma, mb;
    Eigen::Matrix2d sa, sb;
    stats(a, ma, sa);
    stats(b, mb, sb);
    const Eigen::Matrix2d p = sa * sb;
    const double root = std::sqrt(p.trace() + 2.0 * std::sqrt(p.determinant()));
    const double want = (ma - mb).squaredNorm() + sa.trace() + sb.trace() - 2.0 * root;
    EXPECT_NEAR(fid_distance(a, b), want, 1e-4);
    EXPECT_NEAR(fid_distance(a, b), oracle::fid(a, b), 1e-4);
  }
}

TEST(Fid, MatchesGeneralEigenOracleInHigherDimensions) {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const FeatureMap a = oracle::random_map(rng, 6, 6, 5);
    const FeatureMap b = oracle::random_map(rng, 5, 7, 5, -0.5, 1.5);
    EXPECT_NEAR(fid_distance(a, b), oracle::fid(a, b), 1e-4);
  }
}

TEST(Fid, SymmetricAndNonNegative) {
  oracle::Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const FeatureMap a = oracle::random_map(rng, 4, 4, 3);
    const FeatureMap b = oracle::random_map(rng, 4, 4, 3);
    EXPECT_GE(fid_distance(a, b), 0.0);
    EXPECT_NEAR(fid_distance(a, b), fid_distance(b, a), 1e-8);
  }
}
