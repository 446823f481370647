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

#include <sstream>

#include "memprop/errors.hpp"
#include "memprop/sweep.hpp"
#include "memprop/synthetic.hpp"

using namespace memprop;

TEST(Sweep, GridShapeAndDeterminism) {
  const SequenceSource src = translating_square({.frames = 6, .size = 32, .square = 8});
  PipelineConfig base;
  base.grid_cells = 4;
  const auto a = run_sweep(src, base, SweepParam::both);
  ASSERT_EQ(a.size(), 10u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(a[i].param, "beta");
    EXPECT_DOUBLE_EQ(a[i].value, kBetaGrid[i]);
    EXPECT_EQ(a[5 + i].param, "gamma");
    EXPECT_DOUBLE_EQ(a[5 + i].value, kGammaGrid[i]);
    EXPECT_TRUE(a[i].ok) << a[i].error;
  }
  std::ostringstream csv_a, csv_b;
  write_sweep_csv(csv_a, a);
  write_sweep_csv(csv_b, run_sweep(src, base, SweepParam::both));
  EXPECT_EQ(csv_a.str(), csv_b.str());

  std::istringstream lines(csv_a.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "param,value,jf_mean,j_mean,f_mean,pck,status,error");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7) << line;
  }
  EXPECT_EQ(rows, 10);
  EXPECT_GE(best_cell(a, "beta"), 0);
  EXPECT_LT(best_cell(a, "beta"), 5);
  EXPECT_GE(best_cell(a, "gamma"), 5);
}

TEST(Sweep, FailedCellsAreRecorded) {
  SequenceSource src = translating_square({.frames = 3, .size = 32, .square = 8});
  src.mode = SequenceMode::color;
  src.masks.clear();
  const auto cells = run_sweep(src, PipelineConfig{}, SweepParam::beta);
  ASSERT_EQ(cells.size(), 5u);
  for (const auto& c : cells) {
    EXPECT_FALSE(c.ok);
    EXPECT_FALSE(c.error.empty());
  }
  EXPECT_EQ(best_cell(cells, "beta"), -1);
  EXPECT_THROW(parse_sweep_param("delta"), ValidationError);
}
