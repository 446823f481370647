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

#include "memprop/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memprop/errors.hpp"

namespace memprop {

void ClusterParams::validate() const {
  if (grid_size < 1) throw ValidationError("grid size must be at least 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in [0, 1]");
}

std::vector<int> ClusterModel::assignment(int num_cells) const {
  std::vector<int> out(num_cells, -1);
  for (int i = 0; i < size(); ++i) {
    for (int id : clusters[i].member_ids) {
      if (id >= 0 && id < num_cells) out[id] = i;
    }
  }
  return out;
}

std::vector<GridCell> partition_grids(const FeatureMap& map, int s) {
  const int h = map.height();
  const int w = map.width();
  if (s < 1) throw ValidationError("grid size must be at least 1");
  if (s > std::max(h, w)) {
    throw ValidationError("grid size " + std::to_string(s) + " exceeds the map extent");
  }
  const int rows = (h + s - 1) / s;
  const int cols = (w + s - 1) / s;
  const int c = map.channels();
  std::vector<GridCell> cells;
  cells.reserve(static_cast<std::size_t>(rows) * cols);
  for (int gr = 0; gr < rows; ++gr) {
    for (int gc = 0; gc < cols; ++gc) {
      GridCell cell;
      cell.row = gr;
      cell.col = gc;
      cell.id = gr * cols + gc;
      cell.feature = Eigen::VectorXd::Zero(c);
      // Replication padding: out-of-range rows and columns clamp to the edge.
      for (int y = gr * s; y < (gr + 1) * s; ++y) {
        for (int x = gc * s; x < (gc + 1) * s; ++x) {
          const auto px = map.pixel(std::min(y, h - 1), std::min(x, w - 1));
          for (int ch = 0; ch < c; ++ch) cell.feature[ch] += px[ch];
        }
      }
      cell.feature /= static_cast<double>(s) * s;
      const double x0 = gc * s;
      const double x1 = std::min((gc + 1) * s, w);
      const double y0 = gr * s;
      const double y1 = std::min((gr + 1) * s, h);
      cell.center.x = 0.5 * (x0 + x1) / w;
      cell.center.y = 0.5 * (y0 + y1) / h;
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

int grid_size_for(int height, int width, int cells_per_side) {
  if (cells_per_side < 1) throw ValidationError("grid_cells must be at least 1");
  const int shorter = std::min(height, width);
  return std::max(1, (shorter + cells_per_side - 1) / cells_per_side);
}

double grid_cluster_similarity(const GridCell& cell, const Cluster& cluster,
                               double lambda) {
  const double df = (cell.feature - cluster.mu_f).norm();
  const double dp = normalized_distance(cell.center, cluster.mu_p);
  return 1.0 / (1.0 + lambda * df + (1.0 - lambda) * dp);
}

SimilarityStats similarity_stats(const std::vector<double>& similarities) {
  SimilarityStats st;
  if (similarities.empty()) return st;
  const double n = static_cast<double>(similarities.size());
  st.argmax = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < similarities.size(); ++i) {
    sum += similarities[i];
    if (similarities[i] > similarities[st.argmax]) st.argmax = static_cast<int>(i);
  }
  st.max = similarities[st.argmax];
  st.mean = sum / n;
  double var = 0.0;
  for (double s : similarities) var += (s - st.mean) * (s - st.mean);
  st.stddev = std::sqrt(var / n);
  return st;
}

bool joins_cluster(const SimilarityStats& stats, int pool_size,
                   const ClusterParams& params) {
  if (stats.argmax < 0) return false;
  if (pool_size < kOutlierTestMinClusters) return stats.max > params.join_threshold;
  return stats.max > stats.mean + 2.0 * stats.stddev;
}

namespace {

Cluster seed_cluster(const GridCell& cell) {
  Cluster c;
  c.member_ids = {cell.id};
  c.mu_f = cell.feature;
  c.mu_p = cell.center;
  return c;
}

std::vector<double> similarities_to(const GridCell& cell,
                                    const std::vector<Cluster>& clusters, double lambda) {
  std::vector<double> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) out.push_back(grid_cluster_similarity(cell, c, lambda));
  return out;
}

}  // namespace

ClusterModel cluster_target(const std::vector<GridCell>& cells,
                            const ClusterParams& params) {
  params.validate();
  ClusterModel model;
  model.params = params;
  for (const auto& cell : cells) {
    model.grid_rows = std::max(model.grid_rows, cell.row + 1);
    model.grid_cols = std::max(model.grid_cols, cell.col + 1);
  }
  if (cells.empty()) return model;

  model.clusters.push_back(seed_cluster(cells.front()));
  for (std::size_t k = 1; k < cells.size(); ++k) {
    const GridCell& cell = cells[k];
    const auto sims = similarities_to(cell, model.clusters, params.lambda);
    const SimilarityStats st = similarity_stats(sims);
    if (!joins_cluster(st, model.size(), params)) {
      model.clusters.push_back(seed_cluster(cell));
      continue;
    }
    Cluster& c = model.clusters[st.argmax];
    c.member_ids.push_back(cell.id);
    const double n = static_cast<double>(c.member_ids.size());
    c.mu_f += (cell.feature - c.mu_f) / n;
    c.mu_p.x += (cell.center.x - c.mu_p.x) / n;
    c.mu_p.y += (cell.center.y - c.mu_p.y) / n;
  }
  for (auto& c : model.clusters) std::sort(c.member_ids.begin(), c.member_ids.end());
  return model;
}

ReferenceAssignment cluster_reference(const std::vector<GridCell>& cells,
                                      const ClusterModel& target_model) {
  if (target_model.clusters.empty()) {
    throw ValidationError("reference clustering needs a non-empty target model");
  }
  ReferenceAssignment out;
  int max_id = -1;
  for (const auto& cell : cells) max_id = std::max(max_id, cell.id);
  out.cluster_of.assign(max_id + 1, -1);
  for (const auto& cell : cells) {
    const auto sims = similarities_to(cell, target_model.clusters,
                                      target_model.params.lambda);
    const SimilarityStats st = similarity_stats(sims);
    if (joins_cluster(st, target_model.size(), target_model.params)) {
      out.cluster_of[cell.id] = st.argmax;
    } else {
      out.discarded.push_back(cell.id);
    }
  }
  return out;
}

std::vector<unsigned char> cluster_index_image(const std::vector<int>& cluster_of,
                                               int num_clusters) {
  std::vector<unsigned char> out(cluster_of.size(), 0);
  const int span = std::max(1, num_clusters - 1);
  for (std::size_t i = 0; i < cluster_of.size(); ++i) {
    if (cluster_of[i] < 0) continue;
    out[i] = static_cast<unsigned char>(1 + (cluster_of[i] * 254) / span);
  }
  return out;
}

}  // namespace memprop
