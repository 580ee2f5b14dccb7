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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mvglo {

inline constexpr int kMacroblockSize = 16;

/// One planar 4:2:0 picture. Luma drives all analysis; chroma is carried
/// through I/O unchanged.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> luma;
  std::vector<std::uint8_t> chroma_u;
  std::vector<std::uint8_t> chroma_v;

  Frame() = default;
  // Throws kDimension unless both sides are positive multiples of 16.
  Frame(int w, int h, std::uint8_t luma_fill = 0, std::uint8_t chroma_fill = 128);

  std::uint8_t at(int x, int y) const { return luma[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return luma[static_cast<std::size_t>(y) * width + x]; }

  // Coordinates are clamped to the frame rectangle.
  std::uint8_t at_clamped(int x, int y) const;

  int mb_cols() const { return width / kMacroblockSize; }
  int mb_rows() const { return height / kMacroblockSize; }

  std::size_t byte_size() const { return luma.size() + chroma_u.size() + chroma_v.size(); }

  bool operator==(const Frame&) const = default;
};

using Sequence = std::vector<Frame>;

void check_frame_dimensions(int width, int height);

/// Parameters of a synthetic test sequence.
struct SequenceSpec {
  int width = 176;
  int height = 144;
  int frame_count = 32;
  std::uint64_t seed = 1;
  int motion_amplitude = 6;    // max |velocity| per component, pixels/frame
  double texture_scale = 1.0;  // >1 gives finer (rougher) texture
  double noise_sigma = 1.5;
  double flat_probability = 0.3;  // chance that a surface is nearly untextured

  // max_search_range bounds motion_amplitude.
  void validate(int max_search_range = 16) const;
};

Sequence read_yuv420(const std::filesystem::path& path, int width, int height);
void write_yuv420(std::span<const Frame> frames, const std::filesystem::path& path);

/// Layered scene: a panning textured background with rectangular textured
/// objects that wrap around the frame, each with its own integer velocity,
/// plus per-frame Gaussian sensor noise. Pure function of the spec.
Sequence synth_sequence(const SequenceSpec& spec, int max_search_range = 16);

}  // namespace mvglo
