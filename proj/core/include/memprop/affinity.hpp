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

#include <span>
#include <vector>

#include "memprop/feature_map.hpp"
#include "memprop/label_field.hpp"

namespace memprop {

/// Row-stochastic (query pixels) x (reference pixels) matrix. Rows are
/// laid out as the query frame's row-major pixels; columns concatenate the
/// reference frames' pixels in list order.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  AffinityMatrix(int target_height, int target_width, Eigen::MatrixXd weights);

  int target_height() const { return target_height_; }
  int target_width() const { return target_width_; }
  int target_pixels() const { return static_cast<int>(weights_.rows()); }
  int source_pixels() const { return static_cast<int>(weights_.cols()); }
  const Eigen::MatrixXd& weights() const { return weights_; }

  /// Max |row sum - 1| over rows.
  double max_row_deviation() const;
  bool is_row_stochastic(double tolerance = 1e-5) const;

 private:
  int target_height_ = 0;
  int target_width_ = 0;
  Eigen::MatrixXd weights_;
};

struct BranchResult {
  AffinityMatrix affinity;
  LabelField reconstruction;
  double loss = 0.0;  // clamped to [0, 1]
};

constexpr double kDefaultTemperature = 0.07;

/// Row-wise softmax of query * keys^T / temperature. `query` is
/// (queries x c), `keys` is (keys x c). Max-subtracted for stability.
Eigen::MatrixXd softmax_affinity(const Eigen::Ref<const RowMatrix>& query,
                                 const Eigen::Ref<const RowMatrix>& keys,
                                 double temperature);

/// Joint softmax over the union of all reference pixels.
AffinityMatrix compute_affinity(const FeatureMap& query,
                                std::span<const FeatureMap* const> references,
                                double temperature = kDefaultTemperature);
AffinityMatrix compute_affinity(const FeatureMap& query,
                                std::span<const FeatureMap> references,
                                double temperature = kDefaultTemperature);

/// Affinity-weighted sum of the concatenated reference labels. The output
/// takes the query shape from `affinity` and the kind of the references.
LabelField reconstruct_labels(const AffinityMatrix& affinity,
                              std::span<const LabelField* const> references);
LabelField reconstruct_labels(const AffinityMatrix& affinity,
                              std::span<const LabelField> references);

/// Mean absolute error over all pixels and channels, relative to the unit
/// label range, clamped to [0, 1].
double reconstruction_loss(const LabelField& predicted, const LabelField& observed);

/// Loss-weighted convex combination of the two branch affinities:
/// ((1 - L_pr) A_nr + (1 - L_nr) A_pr) / ((1 - L_pr) + (1 - L_nr)).
/// When both losses are 1 the unweighted mean is returned.
AffinityMatrix fuse_affinity(const BranchResult& branch_nr,
                             const BranchResult& branch_pr);
AffinityMatrix fuse_affinity(const AffinityMatrix& a_nr, double loss_nr,
                             const AffinityMatrix& a_pr, double loss_pr);

}  // namespace memprop
