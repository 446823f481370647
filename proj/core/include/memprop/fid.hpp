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

#include "memprop/feature_map.hpp"

namespace memprop {

/// Frechet distance between Gaussian fits of the per-position feature
/// vectors of two maps:
///   |mu_a - mu_b|^2 + tr(S_a + S_b - 2 (S_a S_b)^(1/2)).
/// Covariances are unbiased and regularized by `epsilon` * I. The matrix
/// root trace is taken as tr((S_a^(1/2) S_b S_a^(1/2))^(1/2)) through two
/// symmetric eigendecompositions. Result is clamped at 0.
double fid_distance(const FeatureMap& current, const FeatureMap& reference,
                    double epsilon = 1e-6);

}  // namespace memprop
