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

#include "memprop/prediction.hpp"

#include <cmath>
#include <string>

#include "memprop/errors.hpp"

namespace memprop {

namespace {

struct CellIndex {
  std::vector<int> cluster_of;  // per cell position in `cells`
  int num_clusters = 0;
};

CellIndex index_cells(const ClusterModel& model, const std::vector<GridCell>& cells) {
  int max_id = -1;
  for (const auto& cell : cells) max_id = std::max(max_id, cell.id);
  const std::vector<int> by_id = model.assignment(max_id + 1);
  CellIndex idx;
  idx.num_clusters = model.size();
  idx.cluster_of.reserve(cells.size());
  for (const auto& cell : cells) idx.cluster_of.push_back(by_id[cell.id]);
  return idx;
}

void check_labels(const std::vector<GridCell>& cells, const LabelSet& labels) {
  for (const auto& cell : cells) {
    if (cell.id < 0 || cell.id >= static_cast<int>(labels.labels.size())) {
      throw ValidationError("no label for grid cell " + std::to_string(cell.id));
    }
    if (labels.labels[cell.id].size() != cell.feature.size()) {
      throw ValidationError("label width differs from the cell feature width");
    }
  }
}

// Centroids of f_k + l_k and member counts, per cluster.
void enhanced_centroids(const std::vector<GridCell>& cells, const CellIndex& idx,
                        const LabelSet& labels, std::vector<Eigen::VectorXd>& centroids,
                        std::vector<int>& counts) {
  const Eigen::Index c = cells.empty() ? 0 : cells.front().feature.size();
  centroids.assign(idx.num_clusters, Eigen::VectorXd::Zero(c));
  counts.assign(idx.num_clusters, 0);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const int i = idx.cluster_of[k];
    if (i < 0) continue;
    centroids[i] += cells[k].feature + labels.labels[cells[k].id];
    ++counts[i];
  }
  for (int i = 0; i < idx.num_clusters; ++i) {
    if (counts[i] > 0) centroids[i] /= counts[i];
  }
}

}  // namespace

double label_objective(const ClusterModel& model, const std::vector<GridCell>& cells,
                       const LabelSet& labels, double zeta) {
  check_labels(cells, labels);
  const CellIndex idx = index_cells(model, cells);
  double fit = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const int i = idx.cluster_of[k];
    if (i < 0) continue;
    fit += (labels.labels[cells[k].id] - model.clusters[i].mu_f).norm();
  }
  std::vector<Eigen::VectorXd> m;
  std::vector<int> n;
  enhanced_centroids(cells, idx, labels, m, n);
  double spread = 0.0;
  for (int a = 0; a < idx.num_clusters; ++a) {
    for (int b = 0; b < idx.num_clusters; ++b) {
      if (a == b || n[a] == 0 || n[b] == 0) continue;
      spread += static_cast<double>(n[a]) * n[b] * (m[a] - m[b]).norm();
    }
  }
  return fit - zeta * spread;
}

std::vector<Eigen::VectorXd> label_objective_gradient(const ClusterModel& model,
                                                      const std::vector<GridCell>& cells,
                                                      const LabelSet& labels,
                                                      double zeta) {
  check_labels(cells, labels);
  const CellIndex idx = index_cells(model, cells);
  std::vector<Eigen::VectorXd> m;
  std::vector<int> n;
  enhanced_centroids(cells, idx, labels, m, n);

  // d/dl_k of the spread term is the same for every member of cluster i:
  // 2 sum_{j != i} n_j (m_i - m_j) / |m_i - m_j|.
  const Eigen::Index c = cells.empty() ? 0 : cells.front().feature.size();
  std::vector<Eigen::VectorXd> repel(idx.num_clusters, Eigen::VectorXd::Zero(c));
  for (int i = 0; i < idx.num_clusters; ++i) {
    if (n[i] == 0) continue;
    for (int j = 0; j < idx.num_clusters; ++j) {
      if (j == i || n[j] == 0) continue;
      const Eigen::VectorXd d = m[i] - m[j];
      const double len = d.norm();
      if (len > 0.0) repel[i] += 2.0 * n[j] * d / len;
    }
  }

  std::vector<Eigen::VectorXd> grad(labels.labels.size());
  for (std::size_t id = 0; id < grad.size(); ++id) {
    grad[id] = Eigen::VectorXd::Zero(labels.labels[id].size());
  }
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const int i = idx.cluster_of[k];
    if (i < 0) continue;
    const int id = cells[k].id;
    const Eigen::VectorXd d = labels.labels[id] - model.clusters[i].mu_f;
    const double len = d.norm();
    if (len > 0.0) grad[id] += d / len;
    grad[id] -= zeta * repel[i];
  }
  return grad;
}

LabelOptimizeResult forward_label_optimize(const ClusterModel& model,
                                           const std::vector<GridCell>& cells,
                                           const LabelOptimizeParams& params) {
  if (params.zeta < 0.0) throw ValidationError("zeta must be non-negative");
  if (params.steps < 0) throw ValidationError("steps must be non-negative");
  if (!(params.step_size > 0.0)) throw ValidationError("step size must be positive");

  LabelOptimizeResult result;
  int max_id = -1;
  for (const auto& cell : cells) max_id = std::max(max_id, cell.id);
  const Eigen::Index c = cells.empty() ? 0 : cells.front().feature.size();
  result.labels.labels.assign(max_id + 1, Eigen::VectorXd::Zero(c));
  const CellIndex idx = index_cells(model, cells);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const int i = idx.cluster_of[k];
    if (i < 0) continue;
    result.labels.labels[cells[k].id] = cells[k].feature - model.clusters[i].mu_f;
  }

  double objective = label_objective(model, cells, result.labels, params.zeta);
  result.objective_trace.push_back(objective);
  double step = params.step_size;
  for (int it = 0; it < params.steps; ++it) {
    const auto grad = label_objective_gradient(model, cells, result.labels, params.zeta);
    for (int attempt = 0; attempt <= params.max_retries; ++attempt) {
      LabelSet candidate = result.labels;
      for (std::size_t id = 0; id < grad.size(); ++id) {
        candidate.labels[id] -= step * grad[id];
      }
      const double next = label_objective(model, cells, candidate, params.zeta);
      if (next <= objective) {
        result.labels = std::move(candidate);
        objective = next;
        result.accepted_steps.push_back(step);
        break;
      }
      step *= 0.5;
    }
    result.objective_trace.push_back(objective);
  }
  return result;
}

ClusterModel reference_cluster_model(const std::vector<GridCell>& cells,
                                     const ReferenceAssignment& assignment,
                                     const ClusterModel& target) {
  ClusterModel model = target;
  for (auto& c : model.clusters) c.member_ids.clear();
  std::vector<Eigen::VectorXd> sum_f(model.clusters.size());
  std::vector<NormalizedPoint> sum_p(model.clusters.size());
  for (const auto& cell : cells) {
    if (cell.id >= static_cast<int>(assignment.cluster_of.size())) continue;
    const int i = assignment.cluster_of[cell.id];
    if (i < 0) continue;
    auto& c = model.clusters[i];
    if (c.member_ids.empty()) {
      sum_f[i] = Eigen::VectorXd::Zero(cell.feature.size());
      sum_p[i] = {};
    }
    c.member_ids.push_back(cell.id);
    sum_f[i] += cell.feature;
    sum_p[i].x += cell.center.x;
    sum_p[i].y += cell.center.y;
  }
  for (std::size_t i = 0; i < model.clusters.size(); ++i) {
    auto& c = model.clusters[i];
    if (c.member_ids.empty()) continue;
    const double n = static_cast<double>(c.member_ids.size());
    c.mu_f = sum_f[i] / n;
    c.mu_p = {sum_p[i].x / n, sum_p[i].y / n};
  }
  return model;
}

FeatureMap apply_labels(const FeatureMap& map, const std::vector<GridCell>& cells,
                        const LabelSet& labels, int grid_size) {
  if (grid_size < 1) throw ValidationError("grid size must be at least 1");
  for (const auto& cell : cells) {
    if (cell.id < 0 || cell.id >= static_cast<int>(labels.labels.size()) ||
        labels.labels[cell.id].size() != map.channels()) {
      throw ValidationError("missing or malformed label for grid cell " +
                            std::to_string(cell.id));
    }
  }
  FeatureMap out = map;
  for (const auto& cell : cells) {
    const Eigen::VectorXd& l = labels.labels[cell.id];
    const int y1 = std::min((cell.row + 1) * grid_size, map.height());
    const int x1 = std::min((cell.col + 1) * grid_size, map.width());
    for (int y = cell.row * grid_size; y < y1; ++y) {
      for (int x = cell.col * grid_size; x < x1; ++x) {
        auto px = out.pixel(y, x);
        for (int ch = 0; ch < map.channels(); ++ch) px[ch] += l[ch];
      }
    }
  }
  return out;
}

ClusterSplitFeatures split_by_cluster(const FeatureMap& map,
                                      const std::vector<int>& cluster_of,
                                      int num_clusters, int grid_size) {
  if (grid_size < 1) throw ValidationError("grid size must be at least 1");
  if (num_clusters < 1) throw ValidationError("split needs at least one cluster");
  const int h = map.height();
  const int w = map.width();
  const int c = map.channels();
  const int cols = (w + grid_size - 1) / grid_size;
  ClusterSplitFeatures out;
  out.tensors.assign(num_clusters, FeatureMap(h, w, c));
  out.supports.assign(num_clusters, std::vector<bool>(static_cast<std::size_t>(h) * w));
  out.centroids.assign(num_clusters, Eigen::VectorXd::Zero(c));
  std::vector<int> counts(num_clusters, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t cell = static_cast<std::size_t>(y / grid_size) * cols + x / grid_size;
      const int i = cell < cluster_of.size() ? cluster_of[cell] : -1;
      if (i < 0) continue;
      if (i >= num_clusters) throw ValidationError("cluster index out of range");
      const auto src = map.pixel(y, x);
      auto dst = out.tensors[i].pixel(y, x);
      for (int ch = 0; ch < c; ++ch) {
        dst[ch] = src[ch];
        out.centroids[i][ch] += src[ch];
      }
      out.supports[i][static_cast<std::size_t>(y) * w + x] = true;
      ++counts[i];
    }
  }
  for (int i = 0; i < num_clusters; ++i) {
    if (counts[i] > 0) out.centroids[i] /= counts[i];
  }
  return out;
}

std::vector<double> cluster_weights(const ClusterSplitFeatures& query_split,
                                    const ClusterSplitFeatures& ref_split) {
  if (query_split.size() != ref_split.size()) {
    throw ValidationError("query and reference splits have different cluster counts");
  }
  std::vector<double> w(query_split.size(), 0.0);
  double total = 0.0;
  for (int i = 0; i < query_split.size(); ++i) {
    const auto& sup = ref_split.supports[i];
    if (std::find(sup.begin(), sup.end(), true) == sup.end()) continue;
    w[i] = 1.0 / (1.0 + (query_split.centroids[i] - ref_split.centroids[i]).norm());
    total += w[i];
  }
  if (total <= 0.0) {
    throw ValidationError("no cluster has reference support");
  }
  for (double& v : w) v /= total;
  return w;
}

AffinityMatrix merged_restricted_affinity(const ClusterSplitFeatures& query_split,
                                          const ClusterSplitFeatures& ref_split,
                                          int query_height, int query_width,
                                          double temperature) {
  const std::vector<double> weights = cluster_weights(query_split, ref_split);
  const int q_pixels = query_height * query_width;
  const int r_pixels = ref_split.tensors.front().pixels();
  Eigen::MatrixXd merged = Eigen::MatrixXd::Zero(q_pixels, r_pixels);

  for (int i = 0; i < query_split.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const FeatureMap& qt = query_split.tensors[i];
    const FeatureMap& rt = ref_split.tensors[i];
    if (qt.pixels() != q_pixels || qt.channels() != rt.channels()) {
      throw ValidationError("split tensors do not match the query shape");
    }
    std::vector<int> cols;
    for (int p = 0; p < r_pixels; ++p) {
      if (ref_split.supports[i][p]) cols.push_back(p);
    }
    std::vector<int> rows;
    for (int p = 0; p < q_pixels; ++p) {
      if (query_split.supports[i][p]) rows.push_back(p);
    }

    RowMatrix keys(static_cast<Eigen::Index>(cols.size()), rt.channels());
    for (std::size_t j = 0; j < cols.size(); ++j) keys.row(j) = rt.as_matrix().row(cols[j]);
    RowMatrix queries(static_cast<Eigen::Index>(rows.size()), qt.channels());
    for (std::size_t j = 0; j < rows.size(); ++j) {
      queries.row(j) = qt.as_matrix().row(rows[j]);
    }

    // Rows outside cluster i spread uniformly over its reference support.
    const double spill = weights[i] / static_cast<double>(cols.size());
    std::vector<bool> in_cluster(q_pixels, false);
    for (int r : rows) in_cluster[r] = true;
    for (int p = 0; p < q_pixels; ++p) {
      if (in_cluster[p]) continue;
      for (int col : cols) merged(p, col) += spill;
    }
    if (rows.empty()) continue;
    const Eigen::MatrixXd local = softmax_affinity(queries, keys, temperature);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = 0; b < cols.size(); ++b) {
        merged(rows[a], cols[b]) += weights[i] * local(a, b);
      }
    }
  }
  return {query_height, query_width, std::move(merged)};
}

}  // namespace memprop
