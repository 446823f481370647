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

#include "memprop/feature_core.hpp"
#include "memprop/feature_map.hpp"

namespace memprop {

/// An s x s block of a feature map: mean feature vector, block center and
/// row-major id.
struct GridCell {
  Eigen::VectorXd feature;
  NormalizedPoint center;
  int id = 0;
  int row = 0;  // block coordinates
  int col = 0;
};

struct Cluster {
  std::vector<int> member_ids;  // ascending
  Eigen::VectorXd mu_f;
  NormalizedPoint mu_p;
};

struct ClusterParams {
  int grid_size = 2;
  double lambda = 0.5;
  // Join threshold used while the pool is too small for the outlier test.
  double join_threshold = 0.5;

  void validate() const;
};

/// Below this many clusters the S_max > mean + 2 std test cannot succeed:
/// with population statistics the largest attainable z-score among m values
/// is sqrt(m - 1).
constexpr int kOutlierTestMinClusters = 6;

struct ClusterModel {
  std::vector<Cluster> clusters;
  ClusterParams params;
  int grid_rows = 0;
  int grid_cols = 0;

  int size() const { return static_cast<int>(clusters.size()); }
  /// Cluster index of each cell id, -1 if the id is in no cluster.
  std::vector<int> assignment(int num_cells) const;
};

/// Cells of the map, edge-replicated up to the next multiple of s.
/// ValidationError if s < 1 or s > max(h, w).
std::vector<GridCell> partition_grids(const FeatureMap& map, int s);

/// Grid size giving about `cells_per_side` cells along the shorter side.
int grid_size_for(int height, int width, int cells_per_side);

/// 1 / (1 + lambda |f - mu_f| + (1 - lambda) |p - mu_p|).
double grid_cluster_similarity(const GridCell& cell, const Cluster& cluster,
                               double lambda);

struct SimilarityStats {
  int argmax = -1;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

SimilarityStats similarity_stats(const std::vector<double>& similarities);

/// Decides whether a cell joins its most similar cluster: the outlier test
/// S_max > mean + 2 std once the pool has kOutlierTestMinClusters clusters,
/// otherwise S_max > join_threshold.
bool joins_cluster(const SimilarityStats& stats, int pool_size,
                   const ClusterParams& params);

/// Incremental clustering in row-major cell order. The first cell seeds a
/// cluster; centroids update after every assignment.
ClusterModel cluster_target(const std::vector<GridCell>& cells,
                            const ClusterParams& params);

struct ReferenceAssignment {
  std::vector<int> cluster_of;  // per cell id, -1 when discarded
  std::vector<int> discarded;   // cell ids
};

/// Assigns each reference cell to its most similar target cluster under the
/// same rule, never creating clusters and never moving centroids.
ReferenceAssignment cluster_reference(const std::vector<GridCell>& cells,
                                      const ClusterModel& target_model);

/// Cluster index per cell as an 8-bit grayscale image (one pixel per cell),
/// cluster i maps to a gray level in 1..255 and unassigned cells (-1) to 0.
std::vector<unsigned char> cluster_index_image(const std::vector<int>& cluster_of,
                                               int num_clusters);

}  // namespace memprop
