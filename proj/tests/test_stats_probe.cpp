// Copyright 2026 The mvglo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sstream>

#include "mvglo/error.hpp"
#include "mvglo/stats_probe.hpp"
#include "test_util.hpp"

namespace mvglo {
namespace {

struct Fixture {
  std::vector<Sequence> originals;
  std::vector<CodedSequence> cover;
  Fixture() {
    for (std::uint64_t s = 0; s < 3; ++s) {
      originals.push_back(testing::small_sequence(100 + s));
      cover.push_back(encode_sequence(originals.back(), SearchConfig{SearchAlgorithm::kHex, 8, 15}));
    }
  }
  std::vector<CodedSequence> stego(double rate, std::uint64_t seed = 3) const {
    std::vector<CodedSequence> out;
    for (std::size_t s = 0; s < cover.size(); ++s) out.push_back(embed(cover[s], originals[s], {rate, seed + s}));
    return out;
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

TEST(FourCase, CountsPartitionTheBlocks) {
  const auto& f = fixture();
  const auto st = f.stego(0.3);
  const FourCaseReport rep = four_case_report(f.cover, st, 0.3);
  std::size_t total = 0, brute[4] = {0, 0, 0, 0};
  for (std::size_t s = 0; s < st.size(); ++s) {
    total += st[s].block_count();
    for (std::size_t k = 0; k < st[s].frames.size(); ++k) {
      for (std::size_t b = 0; b < st[s].frames[k].records.size(); ++b) {
        const auto& c = f.cover[s].frames[k].records[b];
        const auto& g = st[s].frames[k].records[b];
        const int label = 1 + (c.mv != g.mv ? 1 : 0) + (c.pmv != g.pmv ? 2 : 0);
        ++brute[label - 1];
      }
    }
  }
  double occ = 0.0;
  for (int c = 0; c < 4; ++c) {
    EXPECT_EQ(rep.counts[static_cast<std::size_t>(c)], brute[c]);
    occ += rep.occurrence[static_cast<std::size_t>(c)];
    EXPECT_GE(rep.optimality[static_cast<std::size_t>(c)], 0.0);
    EXPECT_LE(rep.optimality[static_cast<std::size_t>(c)], 1.0);
  }
  EXPECT_EQ(brute[0] + brute[1] + brute[2] + brute[3], total);
  EXPECT_NEAR(occ, 1.0, 1e-12);
  EXPECT_EQ(rep.qp, 15);
}

TEST(FourCase, RateZeroIsAllCaseOne) {
  const auto& f = fixture();
  const FourCaseReport rep = four_case_report(f.cover, f.stego(0.0), 0.0);
  EXPECT_DOUBLE_EQ(rep.occurrence[0], 1.0);
  EXPECT_EQ(rep.counts[1] + rep.counts[2] + rep.counts[3], 0u);
}

TEST(FourCase, ChangedMvsAreLessOftenOptimal) {
  const auto& f = fixture();
  const FourCaseReport rep = four_case_report(f.cover, f.stego(0.5), 0.5);
  EXPECT_GT(rep.optimality[0], rep.optimality[1]);
}

TEST(FourCase, RejectsMismatchedCorpora) {
  const auto& f = fixture();
  const auto st = f.stego(0.1);
  EXPECT_THROW(four_case_report(std::span(f.cover).first(2), st, 0.1), Error);
  EXPECT_THROW(four_case_report({}, {}, 0.1), Error);
}

TEST(Sweep, RowsFollowRatesAndAreBounded) {
  const auto& f = fixture();
  const std::vector<double> rates{0.0, 0.2, 0.6};
  const auto rows = change_rate_sweep(f.cover, f.originals, rates, 9);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].mv_rate, 0.0);
  EXPECT_EQ(rows[0].pmv_rate, 0.0);
  EXPECT_EQ(rows[0].bitrate_rate, 0.0);
  for (const auto& r : rows) {
    EXPECT_LE(r.mv_rate, 1.0);
    EXPECT_LE(r.bitrate_rate, 1.0);
  }
  EXPECT_LT(rows[1].mv_rate, rows[2].mv_rate);
  EXPECT_NEAR(rows[2].mv_rate, 0.6, 0.02);
  // Deterministic for a fixed seed.
  const auto again = change_rate_sweep(f.cover, f.originals, rates, 9);
  EXPECT_EQ(again[1].pmv_rate, rows[1].pmv_rate);
}

TEST(Heatmap, FromHandBuiltCosts) {
  // Two blocks. Every row of block one is minimised at j = 4; block two at j = 5,
  // except row 1 where it ties between 5 and 6.
  std::vector<CostMatrix> costs(2);
  for (int i = 1; i <= 9; ++i) {
    for (int j = 1; j <= 9; ++j) {
      const auto k = static_cast<std::size_t>(9 * (i - 1) + (j - 1));
      costs[0].j_sad[k] = j == 4 ? 1.0 : 10.0 + i;
      costs[1].j_sad[k] = (j == 5 || (i == 1 && j == 6)) ? 2.0 : 20.0;
    }
  }
  const HeatmapGrid mv = heatmap_from_costs(costs, HeatmapDirection::kMv);
  EXPECT_DOUBLE_EQ(mv.at(3, 4), 0.5);
  EXPECT_DOUBLE_EQ(mv.at(3, 5), 0.5);
  EXPECT_DOUBLE_EQ(mv.at(1, 6), 0.5);
  EXPECT_DOUBLE_EQ(mv.at(3, 6), 0.0);
  EXPECT_EQ(mv.argmax(3), 4);  // first of equal maxima

  const HeatmapGrid pmv = heatmap_from_costs(costs, HeatmapDirection::kPmv);
  // Column j = 4 of block one is minimised by i = 1 (cost 1 in every row: all tie).
  EXPECT_DOUBLE_EQ(pmv.at(4, 1), 1.0);
  // Column j = 1 of block one: 10 + i, so i = 1 wins.
  EXPECT_DOUBLE_EQ(pmv.at(1, 1), 1.0);
  EXPECT_EQ(pmv.direction, HeatmapDirection::kPmv);
}

TEST(Heatmap, CoverCorpusPeaksAtCentre) {
  const HeatmapGrid g = optimality_heatmaps(fixture().cover, HeatmapDirection::kMv);
  EXPECT_EQ(g.argmax(5), 5);
}

TEST(StatsCsv, NamesAndHeaders) {
  EXPECT_EQ(stats_file_name("four_case", 15, "0.05"), "stats_four_case_qp15_p0.05.csv");
  std::ostringstream a, b, c;
  write_sweep_csv(a, std::vector<ChangeRateRow>{{0.1, 0.1, 0.05, 0.2}}, "# p");
  EXPECT_EQ(a.str(), "# p\nrate,mv_rate,pmv_rate,bitrate_rate\n0.1,0.1,0.05,0.2\n");
  FourCaseReport rep;
  rep.qp = 15;
  rep.rate = 0.5;
  rep.counts = {1, 1, 0, 0};
  rep.occurrence = {0.5, 0.5, 0, 0};
  write_four_case_csv(b, rep, "# p");
  EXPECT_NE(b.str().find("qp,rate,case,count,occurrence,optimality\n15,0.5,Case1,1,0.5,0\n"), std::string::npos);
  write_heatmap_csv(c, HeatmapGrid{}, "# p");
  EXPECT_EQ(c.str().substr(0, 31), "# p\npmv_i,j1,j2,j3,j4,j5,j6,j7,");
  int lines = 0;
  for (char ch : c.str()) lines += ch == '\n';
  EXPECT_EQ(lines, 11);
}

}  // namespace
}  // namespace mvglo
