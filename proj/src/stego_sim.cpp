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

#include "mvglo/stego_sim.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mvglo/error.hpp"
#include "mvglo/rng.hpp"

namespace mvglo {

std::string_view to_string(ComponentMode m) {
  switch (m) {
    case ComponentMode::kEither: return "either";
    case ComponentMode::kHorizontalOnly: return "horizontal";
    case ComponentMode::kVerticalOnly: return "vertical";
  }
  return "?";
}

ComponentMode parse_component_mode(std::string_view name) {
  if (name == "either") return ComponentMode::kEither;
  if (name == "horizontal") return ComponentMode::kHorizontalOnly;
  if (name == "vertical") return ComponentMode::kVerticalOnly;
  fail(ErrorCode::kInvalidArgument, "unknown component mode '" + std::string(name) + "'");
}

void EmbedConfig::validate() const {
  require(std::isfinite(change_rate) && change_rate >= 0.0 && change_rate <= 1.0,
          ErrorCode::kInvalidArgument, "change rate must lie in [0, 1]");
}

void check_aligned(const CodedSequence& cover, const CodedSequence& stego) {
  require(cover.frames.size() == stego.frames.size() && cover.width == stego.width &&
              cover.height == stego.height,
          ErrorCode::kMisaligned, "cover and stego sequences differ in layout");
  for (std::size_t k = 0; k < cover.frames.size(); ++k) {
    require(cover.frames[k].records.size() == stego.frames[k].records.size(),
            ErrorCode::kMisaligned, "cover and stego frames differ in block count");
  }
}

CodedSequence embed(const CodedSequence& cover, std::span<const Frame> original, const EmbedConfig& cfg) {
  cfg.validate();
  require(original.size() == cover.frames.size() + 1, ErrorCode::kMisaligned,
          "original frame count does not match the coded sequence");
  for (const Frame& f : original) {
    require(f.width == cover.width && f.height == cover.height, ErrorCode::kMisaligned,
            "original frames differ in size from the coded sequence");
  }

  CodedSequence stego = cover;
  std::vector<BlockCodingRecord*> blocks;
  blocks.reserve(stego.block_count());
  for (auto& f : stego.frames) {
    for (auto& r : f.records) blocks.push_back(&r);
  }

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(blocks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  const auto n_change = static_cast<std::size_t>(std::llround(cfg.change_rate * static_cast<double>(blocks.size())));
  for (std::size_t n = 0; n < n_change; ++n) {
    BlockCodingRecord& r = *blocks[order[n]];
    const bool horizontal = cfg.component_mode == ComponentMode::kHorizontalOnly ||
                            (cfg.component_mode == ComponentMode::kEither && rng.coin());
    const int delta = rng.coin() ? 1 : -1;
    (horizontal ? r.mv.h : r.mv.v) += delta;
  }

  const double lambda = lambda_of_qp(cover.config.qp).lambda;
  for (std::size_t k = 0; k < stego.frames.size(); ++k) {
    FrameCodingRecord& frame = stego.frames[k];
    const FrameCodingRecord& cover_frame = cover.frames[k];
    const Frame& reference = stego.reference_for(k);
    const Frame& current = original[k + 1];
    for (int mby = 0; mby < frame.mb_rows; ++mby) {
      for (int mbx = 0; mbx < frame.mb_cols; ++mbx) {
        const auto idx = static_cast<std::size_t>(mby) * frame.mb_cols + mbx;
        BlockCodingRecord& r = frame.records[idx];
        r.pmv = predict_mv(frame.records, mbx, mby, frame.mb_cols);
        r.mvd = r.mv - r.pmv;
        const int x = mbx * kMacroblockSize;
        const int y = mby * kMacroblockSize;
        write_block(frame.reconstructed, x, y, code_block(current, reference, x, y, stego.config, lambda, r));
        r.mv_changed = r.mv != cover_frame.records[idx].mv;
        r.pmv_changed = r.pmv != cover_frame.records[idx].pmv;
      }
    }
  }
  return stego;
}

CaseLabel classify_case(const BlockCodingRecord& cover, const BlockCodingRecord& stego) {
  require(cover.block_index == stego.block_index, ErrorCode::kMisaligned,
          "records refer to different blocks");
  const bool mv = cover.mv != stego.mv;
  const bool pmv = cover.pmv != stego.pmv;
  if (!mv && !pmv) return CaseLabel::kCase1;
  if (mv && !pmv) return CaseLabel::kCase2;
  if (!mv) return CaseLabel::kCase3;
  return CaseLabel::kCase4;
}

namespace {

struct RateCounts {
  std::size_t blocks = 0, mv = 0, pmv = 0, bits = 0;

  void add(const CodedSequence& cover, const CodedSequence& stego) {
    check_aligned(cover, stego);
    for (std::size_t k = 0; k < cover.frames.size(); ++k) {
      const auto& a = cover.frames[k].records;
      const auto& b = stego.frames[k].records;
      for (std::size_t i = 0; i < a.size(); ++i) {
        ++blocks;
        mv += a[i].mv != b[i].mv;
        pmv += a[i].pmv != b[i].pmv;
        bits += mvd_rate_bits(a[i].mvd) != mvd_rate_bits(b[i].mvd);
      }
    }
  }

  ChangeRates rates() const {
    require(blocks > 0, ErrorCode::kEmpty, "no blocks to compare");
    const auto n = static_cast<double>(blocks);
    return {static_cast<double>(mv) / n, static_cast<double>(pmv) / n, static_cast<double>(bits) / n};
  }
};

}  // namespace

ChangeRates change_rates(const CodedSequence& cover, const CodedSequence& stego) {
  RateCounts c;
  c.add(cover, stego);
  return c.rates();
}

ChangeRates change_rates(std::span<const CodedSequence> cover, std::span<const CodedSequence> stego) {
  require(cover.size() == stego.size(), ErrorCode::kMisaligned, "corpus sizes differ");
  RateCounts c;
  for (std::size_t s = 0; s < cover.size(); ++s) c.add(cover[s], stego[s]);
  return c.rates();
}

double bitrate_change_rate(const CodedSequence& cover, const CodedSequence& stego) {
  return change_rates(cover, stego).bitrate;
}

}  // namespace mvglo
