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

#include "mvglo/stats_probe.hpp"

#include <ostream>

#include "mvglo/error.hpp"
#include "mvglo/provenance.hpp"
#include "mvglo/rng.hpp"

namespace mvglo {

std::vector<ChangeRateRow> change_rate_sweep(std::span<const CodedSequence> cover,
                                             std::span<const Sequence> originals,
                                             std::span<const double> rates, std::uint64_t seed) {
  require(!cover.empty(), ErrorCode::kEmpty, "empty corpus");
  require(cover.size() == originals.size(), ErrorCode::kMisaligned, "corpus and originals differ in size");
  std::vector<ChangeRateRow> rows;
  for (std::size_t r = 0; r < rates.size(); ++r) {
    std::vector<CodedSequence> stego;
    stego.reserve(cover.size());
    for (std::size_t s = 0; s < cover.size(); ++s) {
      stego.push_back(embed(cover[s], originals[s], {rates[r], derive_seed(seed, s * 1000 + r)}));
    }
    const ChangeRates c = change_rates(cover, stego);
    rows.push_back({rates[r], c.mv, c.pmv, c.bitrate});
  }
  return rows;
}

FourCaseReport four_case_report(std::span<const CodedSequence> cover, std::span<const CodedSequence> stego,
                                double rate) {
  require(cover.size() == stego.size(), ErrorCode::kMisaligned, "corpus sizes differ");
  require(!cover.empty(), ErrorCode::kEmpty, "empty corpus");
  FourCaseReport rep;
  rep.qp = stego.front().config.qp;
  rep.rate = rate;
  std::array<std::size_t, 4> optimal{};
  for (std::size_t s = 0; s < cover.size(); ++s) {
    check_aligned(cover[s], stego[s]);
    const double lambda = lambda_of_qp(stego[s].config.qp).lambda;
    for (std::size_t k = 0; k < stego[s].frames.size(); ++k) {
      const auto costs = frame_cost_matrices(stego[s], k, lambda);
      const auto& cov = cover[s].frames[k].records;
      const auto& steg = stego[s].frames[k].records;
      for (std::size_t b = 0; b < steg.size(); ++b) {
        const auto c = static_cast<std::size_t>(classify_case(cov[b], steg[b])) - 1;
        ++rep.counts[c];
        const double centre = costs[b].at(DistortionKind::kSad, kGridCentre, kGridCentre);
        bool is_min = true;
        for (int j = 1; j <= kGridSize; ++j) {
          is_min &= costs[b].at(DistortionKind::kSad, kGridCentre, j) >= centre;
        }
        optimal[c] += is_min;
      }
    }
  }
  std::size_t total = 0;
  for (const auto n : rep.counts) total += n;
  require(total > 0, ErrorCode::kEmpty, "corpus has no blocks");
  for (std::size_t c = 0; c < 4; ++c) {
    rep.occurrence[c] = static_cast<double>(rep.counts[c]) / static_cast<double>(total);
    rep.optimality[c] =
        rep.counts[c] ? static_cast<double>(optimal[c]) / static_cast<double>(rep.counts[c]) : 0.0;
  }
  return rep;
}

int HeatmapGrid::argmax(int condition) const {
  const auto& g = grids[static_cast<std::size_t>(condition - 1)];
  int best = 1;
  for (int x = 2; x <= 9; ++x) {
    if (g[static_cast<std::size_t>(x - 1)] > g[static_cast<std::size_t>(best - 1)]) best = x;
  }
  return best;
}

HeatmapGrid heatmap_from_costs(std::span<const CostMatrix> costs, HeatmapDirection direction) {
  const RawFeature raw = direction == HeatmapDirection::kMv ? f1_glo_mv(costs, DistortionKind::kSad)
                                                            : f3_glo_pmv(costs, DistortionKind::kSad);
  HeatmapGrid grid;
  grid.direction = direction;
  for (std::size_t c = 0; c < 9; ++c) {
    for (std::size_t x = 0; x < 9; ++x) grid.grids[c][x] = raw.values[9 * c + x];
  }
  return grid;
}

HeatmapGrid optimality_heatmaps(std::span<const CodedSequence> corpus, HeatmapDirection direction) {
  std::vector<CostMatrix> costs;
  for (const CodedSequence& s : corpus) {
    auto m = sequence_cost_matrices(s, lambda_of_qp(s.config.qp).lambda);
    costs.insert(costs.end(), m.begin(), m.end());
  }
  return heatmap_from_costs(costs, direction);
}

std::string stats_file_name(std::string_view name, int qp, std::string_view rate) {
  return "stats_" + std::string(name) + "_qp" + std::to_string(qp) + "_p" + std::string(rate) + ".csv";
}

void write_sweep_csv(std::ostream& out, std::span<const ChangeRateRow> rows, std::string_view provenance) {
  out << provenance << '\n' << "rate,mv_rate,pmv_rate,bitrate_rate\n";
  for (const auto& r : rows) {
    out << format_double(r.rate) << ',' << format_double(r.mv_rate) << ',' << format_double(r.pmv_rate)
        << ',' << format_double(r.bitrate_rate) << '\n';
  }
}

void write_four_case_csv(std::ostream& out, const FourCaseReport& report, std::string_view provenance) {
  out << provenance << '\n' << "qp,rate,case,count,occurrence,optimality\n";
  for (std::size_t c = 0; c < 4; ++c) {
    out << report.qp << ',' << format_double(report.rate) << ",Case" << c + 1 << ',' << report.counts[c]
        << ',' << format_double(report.occurrence[c]) << ',' << format_double(report.optimality[c]) << '\n';
  }
}

void write_heatmap_csv(std::ostream& out, const HeatmapGrid& grid, std::string_view provenance) {
  const bool mv = grid.direction == HeatmapDirection::kMv;
  out << provenance << '\n' << (mv ? "pmv_i" : "mv_j");
  for (int x = 1; x <= 9; ++x) out << ',' << (mv ? "j" : "i") << x;
  out << '\n';
  for (int c = 1; c <= 9; ++c) {
    out << c;
    for (int x = 1; x <= 9; ++x) out << ',' << format_double(grid.at(c, x));
    out << '\n';
  }
}

}  // namespace mvglo
