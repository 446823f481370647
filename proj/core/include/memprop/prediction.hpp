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

#include <vector>

#include <Eigen/Core>

#include "memprop/affinity.hpp"
#include "memprop/clustering.hpp"
#include "memprop/feature_map.hpp"

namespace memprop {

/// Per-cell label vectors, indexed by cell id.
struct LabelSet {
  std::vector<Eigen::VectorXd> labels;
};

struct LabelOptimizeParams {
  double zeta = 0.5;
  int steps = 10;
  double step_size = 0.1;
  int max_retries = 5;
};

struct LabelOptimizeResult {
  LabelSet labels;
  std::vector<double> objective_trace;  // J before the first step, then per step
  std::vector<double> accepted_steps;   // step size of each accepted update
};

/// Objective minimized by forward_label_optimize:
///   sum_k |l_k - mu_{c(k)}| - zeta sum_{k1 != k2} |m_{c(k1)} - m_{c(k2)}|
/// where mu are the model centroids and m the centroids of f_k + l_k.
/// Cells not in any cluster are ignored.
double label_objective(const ClusterModel& model,
                       const std::vector<GridCell>& cells, const LabelSet& labels,
                       double zeta);

/// Analytic (sub)gradient of label_objective; zero-length norms contribute 0.
std::vector<Eigen::VectorXd> label_objective_gradient(
    const ClusterModel& model, const std::vector<GridCell>& cells,
    const LabelSet& labels, double zeta);

/// Labels start at f_k - mu_{c(k)} and take `steps` gradient steps. A step
/// that raises the objective is retried with half the step size up to
/// `max_retries` times and otherwise skipped; the halved size carries over.
LabelOptimizeResult forward_label_optimize(const ClusterModel& model,
                                           const std::vector<GridCell>& cells,
                                           const LabelOptimizeParams& params);

/// Clusters over reference cells mirroring the target model: cluster i holds
/// the reference cells assigned to target cluster i, with their own
/// centroids. Clusters without members keep the target centroids.
ClusterModel reference_cluster_model(const std::vector<GridCell>& cells,
                                     const ReferenceAssignment& assignment,
                                     const ClusterModel& target);

/// Adds l_k to every pixel of cell k's block. ValidationError when a cell
/// has no label or the label width differs from the channel count.
FeatureMap apply_labels(const FeatureMap& map, const std::vector<GridCell>& cells,
                        const LabelSet& labels, int grid_size);

struct ClusterSplitFeatures {
  std::vector<FeatureMap> tensors;            // input on cluster i, zero elsewhere
  std::vector<std::vector<bool>> supports;    // per cluster, per pixel
  std::vector<Eigen::VectorXd> centroids;     // mean feature over the support
  std::vector<double> weights;                // filled by the merge step

  int size() const { return static_cast<int>(tensors.size()); }
};

/// Splits a map by a per-cell cluster assignment (-1 = unassigned, zero in
/// every tensor).
ClusterSplitFeatures split_by_cluster(const FeatureMap& map,
                                      const std::vector<int>& cluster_of,
                                      int num_clusters, int grid_size);

/// w_i proportional to 1 / (1 + |mu_query_i - mu_ref_i|); clusters with no
/// reference support get 0. Normalized to sum 1.
std::vector<double> cluster_weights(const ClusterSplitFeatures& query_split,
                                    const ClusterSplitFeatures& ref_split);

/// Sum_i w_i A_i where A_i is the softmax restricted to cluster-i reference
/// pixels for cluster-i query rows and uniform over that support for all
/// other rows.
AffinityMatrix merged_restricted_affinity(const ClusterSplitFeatures& query_split,
                                          const ClusterSplitFeatures& ref_split,
                                          int query_height, int query_width,
                                          double temperature = kDefaultTemperature);

}  // namespace memprop
