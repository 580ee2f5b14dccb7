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

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvglo/glo_features.hpp"
#include "mvglo/stego_sim.hpp"

namespace mvglo {

struct ChangeRateRow {
  double rate = 0.0;
  double mv_rate = 0.0;
  double pmv_rate = 0.0;
  double bitrate_rate = 0.0;
};

/// Embeds every sequence at each rate and measures realised change rates
/// pooled over the corpus. Sequence s at rate index r uses
/// derive_seed(seed, s * 1000 + r).
std::vector<ChangeRateRow> change_rate_sweep(std::span<const CodedSequence> cover,
                                             std::span<const Sequence> originals,
                                             std::span<const double> rates, std::uint64_t seed);

struct FourCaseReport {
  int qp = 0;
  double rate = 0.0;
  std::array<double, 4> occurrence{};  // Case 1..4, sums to 1
  std::array<double, 4> optimality{};  // P(decoded MV locally optimal | case)
  std::array<std::size_t, 4> counts{};
};

/// Local optimality is judged at the decoder: SAD-based costs on the stego
/// reconstruction, row i = 5 (the decoded, post-embedding PMV).
FourCaseReport four_case_report(std::span<const CodedSequence> cover, std::span<const CodedSequence> stego,
                                double rate);

enum class HeatmapDirection { kMv, kPmv };

/// grids[c][x]: c is the conditioning index (PMV i for kMv, MV j for kPmv),
/// x the candidate. Values are the raw f1 / f3 (SAD) coordinates.
struct HeatmapGrid {
  HeatmapDirection direction = HeatmapDirection::kMv;
  std::array<std::array<double, 9>, 9> grids{};

  double at(int condition, int candidate) const {
    return grids[static_cast<std::size_t>(condition - 1)][static_cast<std::size_t>(candidate - 1)];
  }
  int argmax(int condition) const;
};

HeatmapGrid optimality_heatmaps(std::span<const CodedSequence> corpus, HeatmapDirection direction);
HeatmapGrid heatmap_from_costs(std::span<const CostMatrix> costs, HeatmapDirection direction);

/// `stats_<name>_qp<q>_p<rate>.csv`
std::string stats_file_name(std::string_view name, int qp, std::string_view rate);

void write_sweep_csv(std::ostream& out, std::span<const ChangeRateRow> rows, std::string_view provenance);
void write_four_case_csv(std::ostream& out, const FourCaseReport& report, std::string_view provenance);
void write_heatmap_csv(std::ostream& out, const HeatmapGrid& grid, std::string_view provenance);

}  // namespace mvglo
