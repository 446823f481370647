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

#include "memprop/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "memprop/errors.hpp"

namespace memprop {

AffinityMatrix::AffinityMatrix(int target_height, int target_width,
                               Eigen::MatrixXd weights)
    : target_height_(target_height), target_width_(target_width),
      weights_(std::move(weights)) {
  if (static_cast<Eigen::Index>(target_height) * target_width != weights_.rows()) {
    throw ValidationError("affinity rows do not match the query extent");
  }
}

double AffinityMatrix::max_row_deviation() const {
  if (weights_.rows() == 0) return 0.0;
  return (weights_.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

bool AffinityMatrix::is_row_stochastic(double tolerance) const {
  return max_row_deviation() <= tolerance && (weights_.array() >= -tolerance).all() &&
         (weights_.array() <= 1.0 + tolerance).all();
}

Eigen::MatrixXd softmax_affinity(const Eigen::Ref<const RowMatrix>& query,
                                 const Eigen::Ref<const RowMatrix>& keys,
                                 double temperature) {
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  if (query.cols() != keys.cols()) {
    throw ValidationError("query and key channel counts differ");
  }
  if (keys.rows() == 0) throw ValidationError("no reference pixels");
  RowMatrix logits = query * keys.transpose();
  const double inv_t = 1.0 / temperature;
  const Eigen::Index n = logits.cols();
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    double* row = logits.row(i).data();
    const double peak = *std::max_element(row, row + n);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = (row[j] - peak) * inv_t;
      // exp underflows to exactly zero below this bound.
      row[j] = x < -746.0 ? 0.0 : std::exp(x);
      sum += row[j];
    }
    for (Eigen::Index j = 0; j < n; ++j) row[j] /= sum;
  }
  return logits;
}

namespace {

RowMatrix stack_features(const FeatureMap& query,
                         std::span<const FeatureMap* const> references) {
  if (references.empty()) throw ValidationError("empty reference list");
  Eigen::Index total = 0;
  for (const FeatureMap* ref : references) {
    if (ref->channels() != query.channels()) {
      throw ValidationError("reference has " + std::to_string(ref->channels()) +
                            " channels, query has " + std::to_string(query.channels()));
    }
    total += ref->pixels();
  }
  RowMatrix keys(total, query.channels());
  Eigen::Index offset = 0;
  for (const FeatureMap* ref : references) {
    keys.middleRows(offset, ref->pixels()) = ref->as_matrix();
    offset += ref->pixels();
  }
  return keys;
}

template <typename T>
std::vector<const T*> pointers(std::span<const T> items) {
  std::vector<const T*> out;
  out.reserve(items.size());
  for (const T& item : items) out.push_back(&item);
  return out;
}

}  // namespace

AffinityMatrix compute_affinity(const FeatureMap& query,
                                std::span<const FeatureMap* const> references,
                                double temperature) {
  const RowMatrix keys = stack_features(query, references);
  return {query.height(), query.width(),
          softmax_affinity(query.as_matrix(), keys, temperature)};
}

AffinityMatrix compute_affinity(const FeatureMap& query,
                                std::span<const FeatureMap> references,
                                double temperature) {
  const auto refs = pointers(references);
  return compute_affinity(query, std::span<const FeatureMap* const>(refs), temperature);
}

LabelField reconstruct_labels(const AffinityMatrix& affinity,
                              std::span<const LabelField* const> references) {
  if (references.empty()) throw ValidationError("empty reference label list");
  const int dim = references.front()->label_dim();
  const LabelKind kind = references.front()->kind();
  Eigen::Index total = 0;
  for (const LabelField* ref : references) {
    if (ref->label_dim() != dim || ref->kind() != kind) {
      throw ValidationError("reference labels differ in dimension or kind");
    }
    total += ref->pixels();
  }
  if (total != affinity.source_pixels()) {
    throw ValidationError("reference label pixels (" + std::to_string(total) +
                          ") do not match affinity columns (" +
                          std::to_string(affinity.source_pixels()) + ")");
  }
  RowMatrix values(total, dim);
  Eigen::Index offset = 0;
  for (const LabelField* ref : references) {
    values.middleRows(offset, ref->pixels()) = ref->as_matrix();
    offset += ref->pixels();
  }
  LabelField out(affinity.target_height(), affinity.target_width(), dim, kind);
  out.as_matrix() = affinity.weights() * values;
  return out;
}

LabelField reconstruct_labels(const AffinityMatrix& affinity,
                              std::span<const LabelField> references) {
  const auto refs = pointers(references);
  return reconstruct_labels(affinity, std::span<const LabelField* const>(refs));
}

double reconstruction_loss(const LabelField& predicted, const LabelField& observed) {
  if (!predicted.same_shape(observed)) {
    throw ValidationError("reconstruction loss needs labels of equal shape and kind");
  }
  const auto p = predicted.data();
  const auto o = observed.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - o[i]);
  const double loss = sum / static_cast<double>(p.size());
  return std::clamp(loss, 0.0, 1.0);
}

AffinityMatrix fuse_affinity(const AffinityMatrix& a_nr, double loss_nr,
                             const AffinityMatrix& a_pr, double loss_pr) {
  if (a_nr.weights().rows() != a_pr.weights().rows() ||
      a_nr.weights().cols() != a_pr.weights().cols()) {
    throw ValidationError("fused affinities must share a shape");
  }
  if (!std::isfinite(loss_nr) || !std::isfinite(loss_pr)) {
    throw ValidationError("branch losses must be finite");
  }
  loss_nr = std::clamp(loss_nr, 0.0, 1.0);
  loss_pr = std::clamp(loss_pr, 0.0, 1.0);
  const double w_nr = 1.0 - loss_pr;
  const double w_pr = 1.0 - loss_nr;
  const double denom = w_nr + w_pr;
  if (denom <= 0.0 || w_nr == w_pr) {
    return {a_nr.target_height(), a_nr.target_width(),
            0.5 * (a_nr.weights() + a_pr.weights())};
  }
  if (w_pr == 0.0) return a_nr;
  if (w_nr == 0.0) return a_pr;
  return {a_nr.target_height(), a_nr.target_width(),
          (w_nr * a_nr.weights() + w_pr * a_pr.weights()) / denom};
}

AffinityMatrix fuse_affinity(const BranchResult& branch_nr, const BranchResult& branch_pr) {
  return fuse_affinity(branch_nr.affinity, branch_nr.loss, branch_pr.affinity,
                       branch_pr.loss);
}

}  // namespace memprop
