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
#include "memprop/prediction.hpp"
#include "model_checks.hpp"

using namespace memprop;

namespace {

using Instance = oracle::LabelInstance;

Instance make_instance(oracle::Rng& rng, int n, int channels, int clusters) {
  return oracle::make_label_instance(rng, n, channels, clusters);
}

double objective_oracle(const Instance& in, const LabelSet& labels, double zeta) {
  return oracle::label_objective_pairs(in.cells, in.model, labels, zeta);
}

std::vector<Eigen::VectorXd> fd_gradient(const Instance& in, const LabelSet& labels,
                                         double zeta, double h = 1e-6) {
  return oracle::fd_gradient(in.cells, in.model, labels, zeta, h);
}

using oracle::relative_gap;

}  // namespace

TEST(LabelObjective, MatchesPairwiseOracle) {
  oracle::Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto in = make_instance(rng, oracle::uniform_int(rng, 2, 8), 3, oracle::uniform_int(rng, 1, 3));
    LabelSet labels;
    for (std::size_t k = 0; k < in.cells.size(); ++k) {
      labels.labels.push_back(Eigen::VectorXd::Random(3));
    }
    EXPECT_NEAR(label_objective(in.model, in.cells, labels, 0.5),
                objective_oracle(in, labels, 0.5), 1e-9);
  }
}

TEST(ForwardLabelOptimize, ZeroStepsReturnsInitialization) {
  oracle::Rng rng(2);
  const auto in = make_instance(rng, 8, 4, 3);
  LabelOptimizeParams p;
  p.steps = 0;
  const auto r = forward_label_optimize(in.model, in.cells, p);
  const auto of = in.model.assignment(8);
  for (int k = 0; k < 8; ++k) {
    EXPECT_EQ(r.labels.labels[k], in.cells[k].feature - in.model.clusters[of[k]].mu_f);
  }
  EXPECT_EQ(r.objective_trace.size(), 1u);
}

TEST(ForwardLabelOptimize, TraceNonIncreasingAndGradientMatchesFiniteDifferences) {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const auto in = make_instance(rng, oracle::uniform_int(rng, 2, 8), 2, oracle::uniform_int(rng, 1, 3));
    LabelOptimizeParams p;
    p.zeta = oracle::uniform(rng, 0.0, 1.0);
    const auto r = forward_label_optimize(in.model, in.cells, p);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1]);
    }
    // Gradients at the labels each step starts from.
    for (int s = 0; s < p.steps; ++s) {
      LabelOptimizeParams q = p;
      q.steps = s;
      const auto at = forward_label_optimize(in.model, in.cells, q);
      const auto g = label_objective_gradient(in.model, in.cells, at.labels, p.zeta);
      EXPECT_LT(relative_gap(g, fd_gradient(in, at.labels, p.zeta)), 1e-3)
          << "trial " << trial << " step " << s;
    }
  }
}

TEST(ForwardLabelOptimize, SingleClusterDecreases) {
  oracle::Rng rng(4);
  const auto in = make_instance(rng, 6, 3, 1);
  LabelOptimizeParams p;
  p.zeta = 10.0;
  const auto r = forward_label_optimize(in.model, in.cells, p);
  EXPECT_LT(r.objective_trace.back(), r.objective_trace.front());
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
    EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1]);
  }
}

TEST(ForwardLabelOptimize, MatchesFiniteDifferenceDescentOracle) {
  // Two 1-D clusters; the oracle repeats the backtracking scheme with a
  // numerical gradient of the pairwise objective.
  oracle::Rng rng(5);
  const auto in = make_instance(rng, 6, 1, 2);
  LabelOptimizeParams p;
  p.zeta = 0.5;
  p.steps = 10;
  const auto r = forward_label_optimize(in.model, in.cells, p);

  LabelSet labels;
  const auto of = in.model.assignment(6);
  for (int k = 0; k < 6; ++k) labels.labels.push_back(in.cells[k].feature - in.model.clusters[of[k]].mu_f);
  double j = objective_oracle(in, labels, p.zeta);
  std::vector<double> trace{j};
  double step = p.step_size;
  for (int it = 0; it < p.steps; ++it) {
    const auto g = fd_gradient(in, labels, p.zeta, 1e-7);
    for (int attempt = 0; attempt <= p.max_retries; ++attempt) {
      LabelSet next = labels;
      for (int k = 0; k < 6; ++k) next.labels[k] -= step * g[k];
      const double jn = objective_oracle(in, next, p.zeta);
      if (jn <= j) {
        labels = next;
        j = jn;
        break;
      }
      step *= 0.5;
    }
    trace.push_back(j);
  }
  ASSERT_EQ(r.objective_trace.size(), trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) EXPECT_NEAR(r.objective_trace[i], trace[i], 1e-4);
}

TEST(ForwardLabelOptimize, RejectsBadParams) {
  oracle::Rng rng(6);
  const auto in = make_instance(rng, 3, 2, 1);
  LabelOptimizeParams p;
  p.zeta = -1.0;
  EXPECT_THROW(forward_label_optimize(in.model, in.cells, p), ValidationError);
  p = {};
  p.step_size = 0.0;
  EXPECT_THROW(forward_label_optimize(in.model, in.cells, p), ValidationError);
}

TEST(ApplyLabels, IdentityAnnihilationAndBlockAddition) {
  oracle::Rng rng(7);
  // Block-constant 4x4 map so each cell mean equals its pixels.
  FeatureMap m(4, 4, 3);
  for (int br = 0; br < 2; ++br) {
    for (int bc = 0; bc < 2; ++bc) {
      const Eigen::Vector3d v = Eigen::Vector3d::Random();
      for (int y = 0; y < 2; ++y) {
        for (int x = 0; x < 2; ++x) {
          for (int k = 0; k < 3; ++k) m.at(br * 2 + y, bc * 2 + x, k) = v[k];
        }
      }
    }
  }
  const auto cells = partition_grids(m, 2);
  LabelSet zero, neg, rnd;
  for (const auto& c : cells) {
    zero.labels.push_back(Eigen::VectorXd::Zero(3));
    neg.labels.push_back(-c.feature);
    rnd.labels.push_back(Eigen::VectorXd::Random(3));
  }
  EXPECT_EQ(apply_labels(m, cells, zero, 2), m);
  for (double v : apply_labels(m, cells, neg, 2).data()) EXPECT_NEAR(v, 0.0, 1e-15);
  const FeatureMap out = apply_labels(m, cells, rnd, 2);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      const int id = (y / 2) * 2 + x / 2;
      for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(out.at(y, x, k), m.at(y, x, k) + rnd.labels[id][k], 1e-9);
      }
    }
  }
  LabelSet short_set = rnd;
  short_set.labels.pop_back();
  EXPECT_THROW(apply_labels(m, cells, short_set, 2), ValidationError);
}

TEST(SplitByCluster, PartitionIdentity) {
  oracle::Rng rng(8);
  const FeatureMap m = oracle::random_map(rng, 4, 4, 2);
  const auto one = split_by_cluster(m, {0, 0, 0, 0}, 1, 2);
  EXPECT_EQ(one.tensors[0], m);

  const auto two = split_by_cluster(m, {0, 1, 1, 0}, 2, 2);
  for (int i = 0; i < 32; ++i) {
    EXPECT_DOUBLE_EQ(two.tensors[0].data()[i] + two.tensors[1].data()[i], m.data()[i]);
  }

  const auto dropped = split_by_cluster(m, {0, -1, 1, 0}, 2, 2);
  for (int y = 0; y < 2; ++y) {
    for (int x = 2; x < 4; ++x) {
      for (const auto& t : dropped.tensors) {
        EXPECT_EQ(t.at(y, x, 0), 0.0);
        EXPECT_EQ(t.at(y, x, 1), 0.0);
      }
      EXPECT_FALSE(dropped.supports[0][y * 4 + x]);
      EXPECT_FALSE(dropped.supports[1][y * 4 + x]);
    }
  }
}

TEST(ClusterWeights, EmptySupportGetsZero) {
  oracle::Rng rng(9);
  const FeatureMap q = oracle::random_map(rng, 4, 4, 2);
  const FeatureMap r = oracle::random_map(rng, 4, 4, 2);
  const auto qs = split_by_cluster(q, {0, 1, 1, 0}, 2, 2);
  const auto rs = split_by_cluster(r, {0, 0, 0, 0}, 2, 2);
  const auto w = cluster_weights(qs, rs);
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  EXPECT_DOUBLE_EQ(w[1], 0.0);
  EXPECT_THROW(cluster_weights(qs, split_by_cluster(r, {-1, -1, -1, -1}, 2, 2)),
               ValidationError);
}

TEST(RestrictedAffinity, SingleClusterEqualsUnrestricted) {
  oracle::Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const FeatureMap q = oracle::random_map(rng, 4, 6, 3);
    const FeatureMap r = oracle::random_map(rng, 4, 6, 3);
    const std::vector<int> all(6, 0);
    const auto a = merged_restricted_affinity(split_by_cluster(q, all, 1, 2),
                                              split_by_cluster(r, all, 1, 2), 4, 6);
    const std::vector<FeatureMap> refs{r};
    const auto b = compute_affinity(q, std::span<const FeatureMap>(refs));
    EXPECT_LT((a.weights() - b.weights()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(RestrictedAffinity, MatchesBruteForceOracle) {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const FeatureMap q = oracle::random_map(rng, 4, 4, 3);
    const FeatureMap r = oracle::random_map(rng, 4, 4, 3);
    std::vector<int> qc(4), rc(4);
    for (int& v : qc) v = oracle::uniform_int(rng, 0, 1);
    for (int& v : rc) v = oracle::uniform_int(rng, -1, 1);
    rc[0] = 0;
    rc[1] = 1;
    auto per_pixel = [](const std::vector<int>& cells) {
      std::vector<int> out(16);
      for (int p = 0; p < 16; ++p) out[p] = cells[(p / 4 / 2) * 2 + (p % 4) / 2];
      return out;
    };
    const auto a = merged_restricted_affinity(split_by_cluster(q, qc, 2, 2),
                                              split_by_cluster(r, rc, 2, 2), 4, 4);
    const Eigen::MatrixXd want =
        oracle::restricted_affinity(q, per_pixel(qc), r, per_pixel(rc), 2, kDefaultTemperature);
    EXPECT_LT((a.weights() - want).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT(a.max_row_deviation(), 1e-5);
  }
}

TEST(RestrictedAffinity, ZeroWeightConfinesRows) {
  oracle::Rng rng(12);
  const FeatureMap q = oracle::random_map(rng, 2, 4, 2);
  const FeatureMap r = oracle::random_map(rng, 2, 4, 2);
  // Cluster 1 has no reference support, so its weight is 0 and rows of
  // cluster-0 pixels stay inside cluster-0 reference pixels.
  const auto a = merged_restricted_affinity(split_by_cluster(q, {0, 1}, 2, 2),
                                            split_by_cluster(r, {0, -1}, 2, 2), 2, 4);
  for (int row : {0, 1, 4, 5}) {
    for (int col : {2, 3, 6, 7}) EXPECT_EQ(a.weights()(row, col), 0.0);
  }
  EXPECT_LT(a.max_row_deviation(), 1e-12);
}

TEST(ReferenceClusterModel, MirrorsTargetClusters) {
  oracle::Rng rng(13);
  const auto in = make_instance(rng, 6, 2, 2);
  ReferenceAssignment ra;
  ra.cluster_of = {1, 1, -1, 0, 1, 1};
  ra.discarded = {2};
  const auto model = reference_cluster_model(in.cells, ra, in.model);
  ASSERT_EQ(model.size(), 2);
  EXPECT_EQ(model.clusters[0].member_ids, std::vector<int>{3});
  EXPECT_EQ(model.clusters[0].mu_f, in.cells[3].feature);
  EXPECT_EQ(model.clusters[1].member_ids, (std::vector<int>{0, 1, 4, 5}));
  const Eigen::VectorXd mean =
      (in.cells[0].feature + in.cells[1].feature + in.cells[4].feature + in.cells[5].feature) / 4;
  EXPECT_LT((model.clusters[1].mu_f - mean).norm(), 1e-12);
}
