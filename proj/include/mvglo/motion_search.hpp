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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mvglo/codec_core.hpp"
#include "mvglo/video_io.hpp"

namespace mvglo {

enum class SearchAlgorithm { kEsa, kDia, kHex };
enum class DistortionKind { kSad, kSatd };

std::string_view to_string(SearchAlgorithm a);
std::string_view to_string(DistortionKind d);
SearchAlgorithm parse_search_algorithm(std::string_view name);
DistortionKind parse_distortion_kind(std::string_view name);

struct SearchConfig {
  SearchAlgorithm algorithm = SearchAlgorithm::kHex;
  int range = 16;
  int qp = 15;
  DistortionKind distortion = DistortionKind::kSad;

  void validate() const;
};

struct BlockCodingRecord {
  int block_index = 0;
  MotionVector mv;
  MotionVector pmv;
  MotionVector mvd;  // always mv - pmv
  int sad = 0;
  int satd = 0;
  double rd_cost = 0.0;
  bool mv_changed = false;
  bool pmv_changed = false;

  bool operator==(const BlockCodingRecord&) const = default;
};

struct FrameCodingRecord {
  int frame_index = 0;
  int mb_cols = 0;
  int mb_rows = 0;
  std::vector<BlockCodingRecord> records;  // raster order
  Frame reconstructed;
};

/// An IPPP-coded sequence: intra reconstruction of frame 0 followed by one
/// coding record per inter frame.
struct CodedSequence {
  SearchConfig config;
  int width = 0;
  int height = 0;
  Frame intra;
  std::vector<FrameCodingRecord> frames;

  // Reference (previous reconstruction) for inter frame k (0-based in `frames`).
  const Frame& reference_for(std::size_t k) const { return k == 0 ? intra : frames[k - 1].reconstructed; }
  std::size_t block_count() const;
};

/// Componentwise median of the left, top and top-right neighbour MVs.
/// All absent gives (0,0); left only gives the left MV; otherwise absent
/// neighbours count as (0,0).
MotionVector median_pmv(std::optional<MotionVector> left, std::optional<MotionVector> top,
                        std::optional<MotionVector> top_right);

/// PMV for macroblock (mb_x, mb_y) given the records decided so far in
/// raster order. A missing top-right neighbour falls back to top-left.
MotionVector predict_mv(std::span<const BlockCodingRecord> decided, int mb_x, int mb_y, int mb_cols);

struct SearchResult {
  MotionVector mv;
  int distortion = 0;
  double cost = 0.0;
};

SearchResult search(BlockView current, const Frame& reference, MotionVector pmv, const SearchConfig& cfg);

/// Intra stand-in: residual against a flat mid-grey prediction.
Frame encode_intra(const Frame& frame, int qp);

FrameCodingRecord encode_frame(const Frame& current, const Frame& reference_reconstructed,
                               const SearchConfig& cfg, int frame_index = 1);

CodedSequence encode_sequence(std::span<const Frame> frames, const SearchConfig& cfg);

/// Fills sad/satd/rd_cost of `rec` and returns the reconstructed block for
/// the stored mv/pmv/mvd.
Block code_block(const Frame& current, const Frame& reference, int x, int y,
                 const SearchConfig& cfg, double lambda, BlockCodingRecord& rec);

}  // namespace mvglo
