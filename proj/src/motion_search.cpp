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

#include "mvglo/motion_search.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "mvglo/error.hpp"

namespace mvglo {

std::string_view to_string(SearchAlgorithm a) {
  switch (a) {
    case SearchAlgorithm::kEsa: return "esa";
    case SearchAlgorithm::kDia: return "dia";
    case SearchAlgorithm::kHex: return "hex";
  }
  return "?";
}

std::string_view to_string(DistortionKind d) { return d == DistortionKind::kSad ? "sad" : "satd"; }

SearchAlgorithm parse_search_algorithm(std::string_view name) {
  if (name == "esa") return SearchAlgorithm::kEsa;
  if (name == "dia") return SearchAlgorithm::kDia;
  if (name == "hex") return SearchAlgorithm::kHex;
  fail(ErrorCode::kInvalidArgument, "unknown search algorithm '" + std::string(name) + "'");
}

DistortionKind parse_distortion_kind(std::string_view name) {
  if (name == "sad") return DistortionKind::kSad;
  if (name == "satd") return DistortionKind::kSatd;
  fail(ErrorCode::kInvalidArgument, "unknown distortion kind '" + std::string(name) + "'");
}

void SearchConfig::validate() const {
  require(range >= 1, ErrorCode::kInvalidArgument, "search range must be >= 1");
  require(qp >= kMinQp && qp <= kMaxQp, ErrorCode::kInvalidArgument, "qp outside [0, 51]");
}

std::size_t CodedSequence::block_count() const {
  std::size_t n = 0;
  for (const auto& f : frames) n += f.records.size();
  return n;
}

namespace {

int median3(int a, int b, int c) { return std::max(std::min(a, b), std::min(std::max(a, b), c)); }

}  // namespace

MotionVector median_pmv(std::optional<MotionVector> left, std::optional<MotionVector> top,
                        std::optional<MotionVector> top_right) {
  if (!left && !top && !top_right) return {};
  if (left && !top && !top_right) return *left;
  const MotionVector a = left.value_or(MotionVector{});
  const MotionVector b = top.value_or(MotionVector{});
  const MotionVector c = top_right.value_or(MotionVector{});
  return {median3(a.h, b.h, c.h), median3(a.v, b.v, c.v)};
}

MotionVector predict_mv(std::span<const BlockCodingRecord> decided, int mb_x, int mb_y, int mb_cols) {
  auto mv_at = [&](int x, int y) -> std::optional<MotionVector> {
    if (x < 0 || y < 0 || x >= mb_cols) return std::nullopt;
    const auto idx = static_cast<std::size_t>(y) * mb_cols + x;
    if (idx >= decided.size()) return std::nullopt;
    return decided[idx].mv;
  };
  auto top_right = mv_at(mb_x + 1, mb_y - 1);
  if (!top_right) top_right = mv_at(mb_x - 1, mb_y - 1);
  return median_pmv(mv_at(mb_x - 1, mb_y), mv_at(mb_x, mb_y - 1), top_right);
}

namespace {

class Searcher {
 public:
  Searcher(BlockView current, const Frame& reference, MotionVector pmv, const SearchConfig& cfg)
      : current_(current), reference_(reference), pmv_(pmv), cfg_(cfg),
        lambda_(lambda_of_qp(cfg.qp).lambda) {
    // Window centred on the PMV, pulled in so its centre block lies in the frame.
    center_.h = std::clamp(pmv.h, -current.origin_x, reference.width - kMacroblockSize - current.origin_x);
    center_.v = std::clamp(pmv.v, -current.origin_y, reference.height - kMacroblockSize - current.origin_y);
  }

  SearchResult run() {
    if (cfg_.algorithm == SearchAlgorithm::kEsa) return exhaustive();
    const SearchResult from_pmv = pattern(center_);
    const SearchResult from_zero = pattern(clamp_to_window({0, 0}));
    return better(from_zero, from_pmv) ? from_zero : from_pmv;
  }

 private:
  bool in_window(MotionVector mv) const {
    return std::abs(mv.h - center_.h) <= cfg_.range && std::abs(mv.v - center_.v) <= cfg_.range;
  }

  MotionVector clamp_to_window(MotionVector mv) const {
    return {std::clamp(mv.h, center_.h - cfg_.range, center_.h + cfg_.range),
            std::clamp(mv.v, center_.v - cfg_.range, center_.v + cfg_.range)};
  }

  SearchResult evaluate(MotionVector mv) {
    const BlockView pred = fetch_predicted(reference_, current_.origin_x, current_.origin_y, mv, scratch_);
    const int d = cfg_.distortion == DistortionKind::kSad ? sad(current_, pred) : satd(current_, pred);
    return {mv, d, rd_cost(d, mv - pmv_, lambda_)};
  }

  // Lower cost, then fewer MVD bits, then raster order.
  bool better(const SearchResult& a, const SearchResult& b) const {
    if (a.cost != b.cost) return a.cost < b.cost;
    const int ba = mvd_rate_bits(a.mv - pmv_);
    const int bb = mvd_rate_bits(b.mv - pmv_);
    if (ba != bb) return ba < bb;
    if (a.mv.v != b.mv.v) return a.mv.v < b.mv.v;
    return a.mv.h < b.mv.h;
  }

  SearchResult exhaustive() {
    SearchResult best = evaluate(center_);
    for (int v = center_.v - cfg_.range; v <= center_.v + cfg_.range; ++v) {
      for (int h = center_.h - cfg_.range; h <= center_.h + cfg_.range; ++h) {
        const SearchResult r = evaluate({h, v});
        if (better(r, best)) best = r;
      }
    }
    return best;
  }

  // Moves to the best point of `offsets` around the centre; false when the centre wins.
  template <std::size_t N>
  bool step(SearchResult& best, const std::array<MotionVector, N>& offsets) {
    const MotionVector c = best.mv;
    bool moved = false;
    for (const MotionVector off : offsets) {
      const MotionVector cand = c + off;
      if (!in_window(cand)) continue;
      const SearchResult r = evaluate(cand);
      if (better(r, best)) {
        best = r;
        moved = true;
      }
    }
    return moved;
  }

  SearchResult pattern(MotionVector start) {
    static constexpr std::array<MotionVector, 8> kLargeDiamond{
        {{0, -2}, {-1, -1}, {1, -1}, {-2, 0}, {2, 0}, {-1, 1}, {1, 1}, {0, 2}}};
    static constexpr std::array<MotionVector, 4> kSmallDiamond{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
    static constexpr std::array<MotionVector, 6> kHexagon{
        {{-1, -2}, {1, -2}, {-2, 0}, {2, 0}, {-1, 2}, {1, 2}}};
    static constexpr std::array<MotionVector, 8> kSquare{
        {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

    SearchResult best = evaluate(start);
    const int max_steps = 4 * cfg_.range + 4;
    if (cfg_.algorithm == SearchAlgorithm::kDia) {
      for (int i = 0; i < max_steps && step(best, kLargeDiamond); ++i) {
      }
      step(best, kSmallDiamond);
    } else {
      for (int i = 0; i < max_steps && step(best, kHexagon); ++i) {
      }
      step(best, kSquare);
    }
    return best;
  }

  BlockView current_;
  const Frame& reference_;
  MotionVector pmv_;
  const SearchConfig& cfg_;
  double lambda_;
  MotionVector center_;
  Block scratch_{};
};

}  // namespace

SearchResult search(BlockView current, const Frame& reference, MotionVector pmv, const SearchConfig& cfg) {
  cfg.validate();
  return Searcher(current, reference, pmv, cfg).run();
}

Frame encode_intra(const Frame& frame, int qp) {
  Frame recon = frame;
  Block grey;
  grey.fill(128);
  for (int y = 0; y < frame.height; y += kMacroblockSize) {
    for (int x = 0; x < frame.width; x += kMacroblockSize) {
      write_block(recon, x, y, quantize_reconstruct(BlockView::in_frame(frame, x, y), BlockView::of(grey), qp));
    }
  }
  return recon;
}

Block code_block(const Frame& current, const Frame& reference, int x, int y,
                 const SearchConfig& cfg, double lambda, BlockCodingRecord& rec) {
  Block scratch;
  const BlockView cur = BlockView::in_frame(current, x, y);
  const BlockView pred = fetch_predicted(reference, x, y, rec.mv, scratch);
  rec.sad = sad(cur, pred);
  rec.satd = satd(cur, pred);
  rec.rd_cost = rd_cost(cfg.distortion == DistortionKind::kSad ? rec.sad : rec.satd, rec.mvd, lambda);
  return quantize_reconstruct(cur, pred, cfg.qp);
}

FrameCodingRecord encode_frame(const Frame& current, const Frame& reference_reconstructed,
                               const SearchConfig& cfg, int frame_index) {
  cfg.validate();
  require(current.width == reference_reconstructed.width &&
              current.height == reference_reconstructed.height,
          ErrorCode::kDimension, "current and reference frames differ in size");
  const double lambda = lambda_of_qp(cfg.qp).lambda;

  FrameCodingRecord out;
  out.frame_index = frame_index;
  out.mb_cols = current.mb_cols();
  out.mb_rows = current.mb_rows();
  out.records.reserve(static_cast<std::size_t>(out.mb_cols) * out.mb_rows);
  out.reconstructed = current;

  for (int mby = 0; mby < out.mb_rows; ++mby) {
    for (int mbx = 0; mbx < out.mb_cols; ++mbx) {
      const int x = mbx * kMacroblockSize;
      const int y = mby * kMacroblockSize;
      BlockCodingRecord rec;
      rec.block_index = mby * out.mb_cols + mbx;
      rec.pmv = predict_mv(out.records, mbx, mby, out.mb_cols);
      rec.mv = search(BlockView::in_frame(current, x, y), reference_reconstructed, rec.pmv, cfg).mv;
      rec.mvd = rec.mv - rec.pmv;
      const Block recon = code_block(current, reference_reconstructed, x, y, cfg, lambda, rec);
      write_block(out.reconstructed, x, y, recon);
      out.records.push_back(rec);
    }
  }
  return out;
}

CodedSequence encode_sequence(std::span<const Frame> frames, const SearchConfig& cfg) {
  cfg.validate();
  require(!frames.empty(), ErrorCode::kEmpty, "cannot encode an empty sequence");
  CodedSequence out;
  out.config = cfg;
  out.width = frames.front().width;
  out.height = frames.front().height;
  out.intra = encode_intra(frames.front(), cfg.qp);
  out.frames.reserve(frames.size() - 1);
  for (std::size_t t = 1; t < frames.size(); ++t) {
    out.frames.push_back(
        encode_frame(frames[t], out.reference_for(t - 1), cfg, static_cast<int>(t)));
  }
  return out;
}

}  // namespace mvglo
