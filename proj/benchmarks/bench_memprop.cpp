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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "memprop/affinity.hpp"
#include "memprop/builtin_features.hpp"
#include "memprop/clustering.hpp"
#include "memprop/feature_core.hpp"
#include "memprop/fid.hpp"
#include "memprop/pipeline.hpp"
#include "memprop/synthetic.hpp"

using namespace memprop;

namespace {

FeatureMap random_map(int h, int w, int c, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  FeatureMap m(h, w, c);
  for (double& v : m.data()) v = dist(rng);
  return m;
}

void BM_Affinity(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const int refs = static_cast<int>(state.range(1));
  const FeatureMap q = random_map(side, side, 16, 1);
  std::vector<FeatureMap> r;
  for (int i = 0; i < refs; ++i) r.push_back(random_map(side, side, 16, 2 + i));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_affinity(q, std::span<const FeatureMap>(r)));
  }
  state.SetItemsProcessed(state.iterations() * side * side * side * side * refs);
}
BENCHMARK(BM_Affinity)->Args({16, 1})->Args({16, 4})->Args({32, 2});

void BM_Blur(benchmark::State& state) {
  const FeatureMap m = random_map(64, 64, 8, 3);
  const BlurParams p = BlurParams::for_extent(64, 64);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur_2d(m, p));
}
BENCHMARK(BM_Blur);

void BM_Fid(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  const FeatureMap a = random_map(16, 16, c, 4), b = random_map(16, 16, c, 5);
  for (auto _ : state) benchmark::DoNotOptimize(fid_distance(a, b));
}
BENCHMARK(BM_Fid)->Arg(4)->Arg(10)->Arg(32);

void BM_ClusterTarget(benchmark::State& state) {
  const FeatureMap m = random_map(32, 32, 10, 6);
  const auto cells = partition_grids(m, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cluster_target(cells, {}));
}
BENCHMARK(BM_ClusterTarget)->Arg(4)->Arg(2);

void BM_PropagateSquare(benchmark::State& state) {
  TranslatingSquareParams p;
  p.frames = static_cast<int>(state.range(0));
  const SequenceSource src = translating_square(p);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_sequence(src, PipelineConfig{}));
}
BENCHMARK(BM_PropagateSquare)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
