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

#include "memprop/fid.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "memprop/errors.hpp"

namespace memprop {

namespace {

struct GaussianFit {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

GaussianFit fit(const FeatureMap& map, double epsilon) {
  const auto x = map.as_matrix();
  GaussianFit g;
  g.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - g.mean.transpose();
  g.covariance = (centered.transpose() * centered) / static_cast<double>(x.rows() - 1);
  g.covariance.diagonal().array() += epsilon;
  if (!g.covariance.allFinite()) throw ValidationError("non-finite covariance");
  return g;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) throw ValidationError("eigendecomposition failed");
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

double fid_distance(const FeatureMap& current, const FeatureMap& reference,
                    double epsilon) {
  if (current.channels() != reference.channels()) {
    throw ValidationError("FID needs equal channel counts");
  }
  if (current.pixels() < 2 || reference.pixels() < 2) {
    throw ValidationError("FID needs at least two spatial positions per map");
  }
  const GaussianFit a = fit(current, epsilon);
  const GaussianFit b = fit(reference, epsilon);

  // (S_a S_b)^(1/2) is similar to (S_a^(1/2) S_b S_a^(1/2))^(1/2), which is
  // symmetric, so its trace is the sum of square-rooted eigenvalues.
  const Eigen::MatrixXd root_a = psd_sqrt(a.covariance);
  Eigen::MatrixXd inner = root_a * b.covariance * root_a;
  inner = 0.5 * (inner + inner.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inner, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw ValidationError("eigendecomposition failed");
  const double trace_root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  const double fid = (a.mean - b.mean).squaredNorm() + a.covariance.trace() +
                     b.covariance.trace() - 2.0 * trace_root;
  if (!std::isfinite(fid)) throw ValidationError("non-finite FID");
  return std::max(fid, 0.0);
}

}  // namespace memprop
