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

#include "mvglo/glo_features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "mvglo/error.hpp"
#include "mvglo/provenance.hpp"

namespace mvglo {

int dihedral_index(int g, int j) {
  const MotionVector o = grid_offset(j);
  MotionVector t;
  switch (g & 7) {
    case 0: t = {o.h, o.v}; break;
    case 1: t = {-o.v, o.h}; break;
    case 2: t = {-o.h, -o.v}; break;
    case 3: t = {o.v, -o.h}; break;
    case 4: t = {-o.h, o.v}; break;
    case 5: t = {o.h, -o.v}; break;
    case 6: t = {o.v, o.h}; break;
    default: t = {-o.v, -o.h}; break;
  }
  return grid_index(t);
}

CandidateGrid candidate_grid(MotionVector center) {
  CandidateGrid g{center, {}};
  for (int j = 1; j <= kGridSize; ++j) g.members[static_cast<std::size_t>(j - 1)] = center + grid_offset(j);
  return g;
}

CostMatrix cost_matrix(BlockView current_recon, const Frame& reference_recon, MotionVector mv,
                       MotionVector pmv, double lambda) {
  const CandidateGrid mvs = candidate_grid(mv);
  const CandidateGrid pmvs = candidate_grid(pmv);
  CostMatrix m;
  Block scratch;
  for (int j = 1; j <= kGridSize; ++j) {
    const BlockView pred =
        fetch_predicted(reference_recon, current_recon.origin_x, current_recon.origin_y, mvs[j], scratch);
    m.sad[static_cast<std::size_t>(j - 1)] = sad(current_recon, pred);
    m.satd[static_cast<std::size_t>(j - 1)] = satd(current_recon, pred);
  }
  for (int i = 1; i <= kGridSize; ++i) {
    for (int j = 1; j <= kGridSize; ++j) {
      const auto k = static_cast<std::size_t>(9 * (i - 1) + (j - 1));
      const MotionVector mvd = mvs[j] - pmvs[i];
      m.j_sad[k] = rd_cost(m.sad[static_cast<std::size_t>(j - 1)], mvd, lambda);
      m.j_satd[k] = rd_cost(m.satd[static_cast<std::size_t>(j - 1)], mvd, lambda);
    }
  }
  return m;
}

CostMatrix cost_matrix(BlockView current_recon, const Frame& reference_recon, MotionVector mv,
                       MotionVector pmv, const LagrangeMultiplier& lm) {
  return cost_matrix(current_recon, reference_recon, mv, pmv, lm.lambda);
}

std::vector<CostMatrix> frame_cost_matrices(const CodedSequence& coded, std::size_t inter_frame, double lambda) {
  const FrameCodingRecord& f = coded.frames.at(inter_frame);
  const Frame& reference = coded.reference_for(inter_frame);
  std::vector<CostMatrix> out;
  out.reserve(f.records.size());
  for (const BlockCodingRecord& r : f.records) {
    const int x = (r.block_index % f.mb_cols) * kMacroblockSize;
    const int y = (r.block_index / f.mb_cols) * kMacroblockSize;
    out.push_back(cost_matrix(BlockView::in_frame(f.reconstructed, x, y), reference, r.mv, r.pmv, lambda));
  }
  return out;
}

std::vector<CostMatrix> sequence_cost_matrices(const CodedSequence& coded, double lambda) {
  std::vector<CostMatrix> out;
  out.reserve(coded.block_count());
  for (std::size_t k = 0; k < coded.frames.size(); ++k) {
    auto frame = frame_cost_matrices(coded, k, lambda);
    out.insert(out.end(), frame.begin(), frame.end());
  }
  return out;
}

namespace {

// Visits every (condition, candidate) pair at which the candidate attains
// the minimum over its line. For the MV direction a line is a row (fixed
// PMV i, candidates j); for the PMV direction a column (fixed MV j,
// candidates i). `cost(c, x)` is J for condition c and candidate x.
template <typename Cost, typename Visit>
std::size_t for_each_minimiser(Cost cost, Visit visit) {
  std::size_t extra = 0;
  for (int c = 1; c <= kGridSize; ++c) {
    double best = cost(c, 1);
    for (int x = 2; x <= kGridSize; ++x) best = std::min(best, cost(c, x));
    int winners = 0;
    for (int x = 1; x <= kGridSize; ++x) {
      if (cost(c, x) == best) {
        visit(c, x);
        ++winners;
      }
    }
    extra += static_cast<std::size_t>(winners - 1);
  }
  return extra;
}

std::size_t slot(int condition, int candidate) {
  return static_cast<std::size_t>(9 * (condition - 1) + (candidate - 1));
}

RawFeature probability_feature(std::span<const CostMatrix> costs, DistortionKind d, bool mv_direction) {
  require(!costs.empty(), ErrorCode::kEmpty, "no blocks to extract features from");
  RawFeature out;
  std::array<std::size_t, 81> counts{};
  for (const CostMatrix& m : costs) {
    auto cost = [&](int c, int x) { return mv_direction ? m.at(d, c, x) : m.at(d, x, c); };
    out.extra_winners += for_each_minimiser(cost, [&](int c, int x) { ++counts[slot(c, x)]; });
  }
  out.blocks = costs.size();
  const auto L = static_cast<double>(costs.size());
  for (std::size_t k = 0; k < counts.size(); ++k) out.values[k] = static_cast<double>(counts[k]) / L;
  return out;
}

RawFeature exponential_feature(std::span<const CostMatrix> costs, DistortionKind d, bool mv_direction) {
  require(!costs.empty(), ErrorCode::kEmpty, "no blocks to extract features from");
  RawFeature out;
  std::array<double, 81> mass{};
  for (const CostMatrix& m : costs) {
    auto cost = [&](int c, int x) { return mv_direction ? m.at(d, c, x) : m.at(d, x, c); };
    bool zero_centre = false;
    for (int c = 1; c <= kGridSize; ++c) zero_centre |= cost(c, kGridCentre) <= 0.0;
    if (zero_centre) {
      ++out.skipped;
      continue;
    }
    out.extra_winners += for_each_minimiser(cost, [&](int c, int x) {
      const double centre = cost(c, kGridCentre);
      mass[slot(c, x)] += std::exp(std::abs(centre - cost(c, x)) / centre);
    });
  }
  out.blocks = costs.size();
  double z = 0.0;
  for (const double v : mass) z += v;
  require(z > 0.0, ErrorCode::kZeroCenterCost, "every block has a zero centre cost");
  for (std::size_t k = 0; k < mass.size(); ++k) out.values[k] = mass[k] / z;
  return out;
}

}  // namespace

RawFeature f1_glo_mv(std::span<const CostMatrix> costs, DistortionKind d) {
  return probability_feature(costs, d, true);
}

RawFeature f2_glo_mv(std::span<const CostMatrix> costs, DistortionKind d) {
  return exponential_feature(costs, d, true);
}

RawFeature f3_glo_pmv(std::span<const CostMatrix> costs, DistortionKind d) {
  return probability_feature(costs, d, false);
}

RawFeature f4_glo_pmv(std::span<const CostMatrix> costs, DistortionKind d) {
  return exponential_feature(costs, d, false);
}

namespace {

const std::array<std::vector<int>, 3> kMvGroups{{{1, 3, 7, 9}, {2, 4, 6, 8}, {5}}};

// PMV subsets per MV index, in output order.
const std::array<std::vector<std::vector<int>>, 9> kPmvSubsets{{
    {{1}, {2, 4}, {5}, {3, 7}, {6, 8}, {9}},
    {{2}, {1, 3, 5}, {4, 6}, {8}, {7, 9}},
    {{3}, {2, 6}, {5}, {1, 9}, {4, 8}, {7}},
    {{4}, {1, 5, 7}, {2, 8}, {6}, {3, 9}},
    {{1, 3, 7, 9}, {2, 4, 6, 8}, {5}},
    {{6}, {3, 5, 9}, {2, 8}, {4}, {1, 7}},
    {{7}, {4, 8}, {5}, {1, 9}, {2, 6}, {3}},
    {{8}, {5, 7, 9}, {4, 6}, {2}, {1, 3}},
    {{9}, {6, 8}, {5}, {3, 7}, {2, 4}, {1}},
}};

}  // namespace

std::span<const std::vector<int>> pmv_subsets_for(int j) {
  require(j >= 1 && j <= kGridSize, ErrorCode::kInvalidArgument, "grid index out of range");
  return kPmvSubsets[static_cast<std::size_t>(j - 1)];
}

std::array<double, 36> symmetrize_glo_mv(std::span<const double, 324> raw) {
  std::array<double, 36> out{};
  for (std::size_t block = 0; block < 4; ++block) {
    const bool probability = block < 2;
    const double* f = raw.data() + 81 * block;
    for (std::size_t gi = 0; gi < 3; ++gi) {
      for (std::size_t gj = 0; gj < 3; ++gj) {
        double s = 0.0;
        for (const int i : kMvGroups[gi]) {
          for (const int j : kMvGroups[gj]) s += f[slot(i, j)];
        }
        if (probability) s /= static_cast<double>(kMvGroups[gi].size());
        out[9 * block + 3 * gi + gj] = s;
      }
    }
  }
  return out;
}

std::array<double, 28> symmetrize_glo_pmv(std::span<const double, 162> raw) {
  std::array<double, 28> out{};
  for (std::size_t block = 0; block < 2; ++block) {
    const bool probability = block == 0;
    const double* f = raw.data() + 81 * block;
    std::size_t pos = 14 * block;
    for (const auto& group : kMvGroups) {
      const std::size_t n_subsets = kPmvSubsets[static_cast<std::size_t>(group.front() - 1)].size();
      for (std::size_t s = 0; s < n_subsets; ++s) {
        double sum = 0.0;
        for (const int j : group) {
          for (const int i : kPmvSubsets[static_cast<std::size_t>(j - 1)][s]) sum += f[slot(j, i)];
        }
        if (probability) sum /= static_cast<double>(group.size());
        out[pos++] = sum;
      }
    }
  }
  return out;
}

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kGloMv324: return "GLO-MV-324";
    case Variant::kGloPmv162: return "GLO-PMV-162";
    case Variant::kGloMv36: return "GLO-MV-36";
    case Variant::kGloPmv28: return "GLO-PMV-28";
    case Variant::kGlo64: return "GLO-64";
    case Variant::kNpe36: return "NPE-36";
    case Variant::kAoso18: return "AoSO-18";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (const Variant v : {Variant::kGloMv324, Variant::kGloPmv162, Variant::kGloMv36, Variant::kGloPmv28,
                          Variant::kGlo64, Variant::kNpe36, Variant::kAoso18}) {
    if (name == variant_name(v)) return v;
  }
  fail(ErrorCode::kInvalidArgument, "unknown feature variant '" + std::string(name) + "'");
}

std::size_t variant_dimension(Variant v) {
  switch (v) {
    case Variant::kGloMv324: return 324;
    case Variant::kGloPmv162: return 162;
    case Variant::kGloMv36: return 36;
    case Variant::kGloPmv28: return 28;
    case Variant::kGlo64: return 64;
    case Variant::kNpe36: return 36;
    case Variant::kAoso18: return 18;
  }
  return 0;
}

FeatureSet compute_features(std::span<const CostMatrix> costs) {
  require(!costs.empty(), ErrorCode::kEmpty, "no blocks to extract features from");
  FeatureSet set;
  set.blocks = costs.size();
  const std::array<RawFeature, 4> mv{f1_glo_mv(costs, DistortionKind::kSad), f1_glo_mv(costs, DistortionKind::kSatd),
                                     f2_glo_mv(costs, DistortionKind::kSad), f2_glo_mv(costs, DistortionKind::kSatd)};
  for (std::size_t b = 0; b < 4; ++b) std::copy(mv[b].values.begin(), mv[b].values.end(), set.glo_mv.begin() + 81 * b);
  const RawFeature f3 = f3_glo_pmv(costs);
  const RawFeature f4 = f4_glo_pmv(costs);
  std::copy(f3.values.begin(), f3.values.end(), set.glo_pmv.begin());
  std::copy(f4.values.begin(), f4.values.end(), set.glo_pmv.begin() + 81);
  set.row_extra_winners = mv[0].extra_winners + mv[1].extra_winners;
  set.column_extra_winners = f3.extra_winners;
  set.skipped_zero_centre = mv[2].skipped;

  // Rate-free baseline: J reduces to the SAD of each MV candidate.
  std::array<std::size_t, 9> wins{};
  std::array<double, 9> mass{};
  for (const CostMatrix& m : costs) {
    const int best = *std::min_element(m.sad.begin(), m.sad.end());
    const double centre = m.sad[kGridCentre - 1];
    for (std::size_t j = 0; j < 9; ++j) {
      if (m.sad[j] != best) continue;
      ++wins[j];
      if (centre > 0.0) mass[j] += std::exp(std::abs(centre - m.sad[j]) / centre);
    }
  }
  double z = 0.0;
  for (const double v : mass) z += v;
  for (std::size_t j = 0; j < 9; ++j) {
    set.aoso[j] = static_cast<double>(wins[j]) / static_cast<double>(costs.size());
    // All-zero when every block had a zero centre SAD.
    set.aoso[9 + j] = z > 0.0 ? mass[j] / z : 0.0;
  }
  return set;
}

FeatureVector select_variant(const FeatureSet& set, Variant v) {
  FeatureVector out{v, {}};
  auto& vals = out.values;
  switch (v) {
    case Variant::kGloMv324: vals.assign(set.glo_mv.begin(), set.glo_mv.end()); break;
    case Variant::kGloPmv162: vals.assign(set.glo_pmv.begin(), set.glo_pmv.end()); break;
    case Variant::kGloMv36: {
      const auto s = symmetrize_glo_mv(set.glo_mv);
      vals.assign(s.begin(), s.end());
      break;
    }
    case Variant::kGloPmv28: {
      const auto s = symmetrize_glo_pmv(set.glo_pmv);
      vals.assign(s.begin(), s.end());
      break;
    }
    case Variant::kGlo64: {
      const auto a = symmetrize_glo_mv(set.glo_mv);
      const auto b = symmetrize_glo_pmv(set.glo_pmv);
      vals.assign(a.begin(), a.end());
      vals.insert(vals.end(), b.begin(), b.end());
      break;
    }
    case Variant::kNpe36:
      // Row i = 5 of each raw GLO-MV block.
      for (std::size_t b = 0; b < 4; ++b) {
        const auto first = set.glo_mv.begin() + 81 * b + 9 * (kGridCentre - 1);
        vals.insert(vals.end(), first, first + 9);
      }
      break;
    case Variant::kAoso18: vals.assign(set.aoso.begin(), set.aoso.end()); break;
  }
  return out;
}

FeatureVector extract(const CodedSequence& coded, Variant v) {
  require(!coded.frames.empty(), ErrorCode::kEmpty, "sequence has no inter frames");
  const auto costs = sequence_cost_matrices(coded, lambda_of_qp(coded.config.qp).lambda);
  return select_variant(compute_features(costs), v);
}

std::vector<FeatureVector> extract_per_frame(const CodedSequence& coded, Variant v) {
  require(!coded.frames.empty(), ErrorCode::kEmpty, "sequence has no inter frames");
  const double lambda = lambda_of_qp(coded.config.qp).lambda;
  std::vector<FeatureVector> out;
  for (std::size_t k = 0; k < coded.frames.size(); ++k) {
    out.push_back(select_variant(compute_features(frame_cost_matrices(coded, k, lambda)), v));
  }
  return out;
}

void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows, std::string_view provenance) {
  out << provenance << '\n';
  const std::size_t dim = rows.empty() ? 0 : rows.front().values.size();
  out << "label,variant,sequence";
  for (std::size_t k = 1; k <= dim; ++k) out << ",v" << k;
  out << '\n';
  for (const FeatureRow& r : rows) {
    require(r.values.size() == dim, ErrorCode::kMixedDimension, "feature rows differ in dimension");
    out << r.label << ',' << variant_name(r.variant) << ',' << r.sequence;
    for (const double v : r.values) out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<FeatureRow> read_feature_csv(std::istream& in) {
  std::vector<FeatureRow> rows;
  std::string line;
  bool have_header = false;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (!have_header) {
      if (cells.size() < 3 || cells[0] != "label" || cells[1] != "variant" || cells[2] != "sequence") {
        fail(ErrorCode::kFormat, "feature CSV header must start with label,variant,sequence");
      }
      dim = cells.size() - 3;
      have_header = true;
      continue;
    }
    if (cells.size() != dim + 3) {
      fail(ErrorCode::kFormat, "feature CSV line " + std::to_string(line_no) + " has " +
                                   std::to_string(cells.size()) + " cells");
    }
    FeatureRow r;
    if (cells[0] != "0" && cells[0] != "1") {
      fail(ErrorCode::kFormat, "feature CSV line " + std::to_string(line_no) + ": label must be 0 or 1");
    }
    r.label = cells[0] == "1" ? 1 : 0;
    r.variant = parse_variant(cells[1]);
    r.sequence = cells[2];
    r.values.reserve(dim);
    for (std::size_t k = 3; k < cells.size(); ++k) r.values.push_back(parse_double(cells[k]));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace mvglo
