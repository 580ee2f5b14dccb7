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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstdlib>

#include "mvglo/video_io.hpp"

namespace mvglo {

/// Integer-pel motion vector; also used for PMVs and MVDs.
struct MotionVector {
  int h = 0;
  int v = 0;

  friend constexpr MotionVector operator+(MotionVector a, MotionVector b) { return {a.h + b.h, a.v + b.v}; }
  friend constexpr MotionVector operator-(MotionVector a, MotionVector b) { return {a.h - b.h, a.v - b.v}; }
  friend constexpr bool operator==(MotionVector, MotionVector) = default;
};

inline constexpr int kMvComponentBound = 1 << 15;

constexpr bool in_bounds(MotionVector mv) {
  return std::abs(mv.h) <= kMvComponentBound && std::abs(mv.v) <= kMvComponentBound;
}

inline constexpr int kBlockSamples = kMacroblockSize * kMacroblockSize;
using Block = std::array<std::uint8_t, kBlockSamples>;

/// A 16x16 window of luma samples. `origin_*` is the block position in its
/// frame; `samples` points at the top-left sample.
struct BlockView {
  const std::uint8_t* samples = nullptr;
  std::ptrdiff_t stride = kMacroblockSize;
  int origin_x = 0;
  int origin_y = 0;

  // Throws kDimension when the block is not fully inside the frame.
  static BlockView in_frame(const Frame& frame, int x, int y);
  static BlockView of(const Block& block, int x = 0, int y = 0) {
    return {block.data(), kMacroblockSize, x, y};
  }

  std::uint8_t operator()(int dx, int dy) const { return samples[dy * stride + dx]; }
};

/// Motion-compensated block at (x, y) + mv. Returns a view straight into
/// `reference` when the block is inside it, otherwise fills `scratch` with
/// border-clamped samples.
BlockView fetch_predicted(const Frame& reference, int x, int y, MotionVector mv, Block& scratch);

Block copy_block(BlockView view);

// Stores a block at (x, y); the block must lie inside the frame.
void write_block(Frame& frame, int x, int y, const Block& block);

int sad(BlockView a, BlockView b);

/// 4x4 Hadamard SATD over the 16 tiles, total halved.
int satd(BlockView a, BlockView b);

/// Length of the signed exp-Golomb codeword for k.
constexpr int exp_golomb_se_bits(int k) {
  const auto code = static_cast<std::uint32_t>(k > 0 ? 2 * k - 1 : -2 * k);
  return 2 * (static_cast<int>(std::bit_width(code + 1)) - 1) + 1;
}

constexpr int mvd_rate_bits(MotionVector mvd) {
  return exp_golomb_se_bits(mvd.h) + exp_golomb_se_bits(mvd.v);
}

struct LagrangeMultiplier {
  int qp = 0;
  double lambda = 0.0;
};

inline constexpr int kMinQp = 0;
inline constexpr int kMaxQp = 51;

/// lambda = sqrt(0.85 * 2^((qp - 12) / 3)); throws kInvalidArgument outside [0, 51].
LagrangeMultiplier lambda_of_qp(int qp);

inline double rd_cost(int distortion, MotionVector mvd, double lambda) {
  return static_cast<double>(distortion) + lambda * mvd_rate_bits(mvd);
}

inline double rd_cost(int distortion, MotionVector mvd, const LagrangeMultiplier& lm) {
  return rd_cost(distortion, mvd, lm.lambda);
}

/// Continuous quantiser step, doubling every 6 QP.
double qstep_of_qp(int qp);

/// Residual coding round trip: 4x4 orthonormal DCT, uniform rounding
/// quantiser, inverse DCT, clamped add back onto the prediction.
Block quantize_reconstruct(BlockView current, BlockView predicted, int qp);

}  // namespace mvglo
