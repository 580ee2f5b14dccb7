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
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvglo/codec_core.hpp"
#include "mvglo/motion_search.hpp"

namespace mvglo {

// Candidate grids use 1-based indices in row-major order; index j sits at
// offset ((j-1) mod 3 - 1, (j-1) div 3 - 1), so 5 is the centre and 4 is one
// pixel to the left.
inline constexpr int kGridSize = 9;
inline constexpr int kGridCentre = 5;

constexpr MotionVector grid_offset(int j) { return {(j - 1) % 3 - 1, (j - 1) / 3 - 1}; }

constexpr int grid_index(MotionVector offset) { return (offset.v + 1) * 3 + (offset.h + 1) + 1; }

/// Index that j moves to under dihedral transform g (0..7) of the 3x3 grid.
/// g = 0 is the identity.
int dihedral_index(int g, int j);

struct CandidateGrid {
  MotionVector center;
  std::array<MotionVector, kGridSize> members;

  const MotionVector& operator[](int j) const { return members[static_cast<std::size_t>(j - 1)]; }
};

CandidateGrid candidate_grid(MotionVector center);

/// Rate-distortion costs of one block over the PMV grid (rows i) and the
/// MV grid (columns j). Distortions depend on j only and are stored once.
struct CostMatrix {
  std::array<int, kGridSize> sad{};
  std::array<int, kGridSize> satd{};
  std::array<double, kGridSize * kGridSize> j_sad{};   // [9 * (i-1) + (j-1)]
  std::array<double, kGridSize * kGridSize> j_satd{};

  double at(DistortionKind d, int i, int j) const {
    const auto k = static_cast<std::size_t>(9 * (i - 1) + (j - 1));
    return d == DistortionKind::kSad ? j_sad[k] : j_satd[k];
  }
};

/// Decoder-side costs: 9 SAD/SATD evaluations against `reference_recon`
/// and 81 rate terms per distortion kind.
CostMatrix cost_matrix(BlockView current_recon, const Frame& reference_recon, MotionVector mv,
                       MotionVector pmv, double lambda);
CostMatrix cost_matrix(BlockView current_recon, const Frame& reference_recon, MotionVector mv,
                       MotionVector pmv, const LagrangeMultiplier& lm);

/// One matrix per inter block, in coding order, from reconstructed pictures
/// and decoded MV/PMV only.
std::vector<CostMatrix> sequence_cost_matrices(const CodedSequence& coded, double lambda);
std::vector<CostMatrix> frame_cost_matrices(const CodedSequence& coded, std::size_t inter_frame, double lambda);

/// 81 feature values plus bookkeeping. `extra_winners` counts minimisers
/// beyond the first, summed over all rows (f1/f2) or columns (f3/f4) and
/// blocks; `skipped` counts blocks dropped by the zero-centre-cost guard.
struct RawFeature {
  std::array<double, kGridSize * kGridSize> values{};
  std::size_t blocks = 0;
  std::size_t extra_winners = 0;
  std::size_t skipped = 0;
};

// f1/f2: index 9*(i-1) + (j-1); f3/f4: index 9*(j-1) + (i-1).
RawFeature f1_glo_mv(std::span<const CostMatrix> costs, DistortionKind d);
RawFeature f2_glo_mv(std::span<const CostMatrix> costs, DistortionKind d);
RawFeature f3_glo_pmv(std::span<const CostMatrix> costs, DistortionKind d = DistortionKind::kSad);
RawFeature f4_glo_pmv(std::span<const CostMatrix> costs, DistortionKind d = DistortionKind::kSad);

inline constexpr std::array<int, 4> kCornerIndices{1, 3, 7, 9};
inline constexpr std::array<int, 4> kEdgeIndices{2, 4, 6, 8};

/// `raw` = f1 SAD, f1 SATD, f2 SAD, f2 SATD (81 each). Output: per block
/// of the input, 3x3 cells over (PMV group, MV group) with groups ordered
/// corners, edges, centre.
std::array<double, 36> symmetrize_glo_mv(std::span<const double, 324> raw);

/// `raw` = f3, f4 (81 each). Output per block: 6 corner-MV subsets, 5
/// edge-MV subsets, then centre-MV subsets (corners, edges, centre).
std::array<double, 28> symmetrize_glo_pmv(std::span<const double, 162> raw);

/// PMV subsets used for a given MV index when pooling GLO-PMV.
std::span<const std::vector<int>> pmv_subsets_for(int j);

enum class Variant { kGloMv324, kGloPmv162, kGloMv36, kGloPmv28, kGlo64, kNpe36, kAoso18 };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);
std::size_t variant_dimension(Variant v);

struct FeatureVector {
  Variant variant = Variant::kGlo64;
  std::vector<double> values;
};

struct FeatureSet {
  std::array<double, 324> glo_mv{};   // f1 SAD | f1 SATD | f2 SAD | f2 SATD
  std::array<double, 162> glo_pmv{};  // f3 | f4
  std::array<double, 18> aoso{};      // rate-free f1 | f2 at the decoded PMV
  std::size_t blocks = 0;
  std::size_t row_extra_winners = 0;  // f1, SAD and SATD combined
  std::size_t column_extra_winners = 0;
  std::size_t skipped_zero_centre = 0;
};

FeatureSet compute_features(std::span<const CostMatrix> costs);
FeatureVector select_variant(const FeatureSet& set, Variant v);

/// Per-sequence extraction over every inter block of `coded`.
FeatureVector extract(const CodedSequence& coded, Variant v);
/// One vector per inter frame.
std::vector<FeatureVector> extract_per_frame(const CodedSequence& coded, Variant v);

/// Feature CSV: header comment row, then `label,variant,sequence,v1..vN`.
struct FeatureRow {
  int label = 0;  // 0 cover, 1 stego
  Variant variant = Variant::kGlo64;
  std::string sequence;
  std::vector<double> values;
};

void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows, std::string_view provenance);
std::vector<FeatureRow> read_feature_csv(std::istream& in);

}  // namespace mvglo
