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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <unistd.h>

#include "mvglo/codec_core.hpp"
#include "mvglo/motion_search.hpp"
#include "mvglo/rng.hpp"
#include "mvglo/video_io.hpp"

namespace mvglo::testing {

inline Frame random_frame(Rng& rng, int w = 64, int h = 48) {
  Frame f(w, h);
  for (auto& p : f.luma) p = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  return f;
}

inline Sequence small_sequence(std::uint64_t seed, int frames = 6, int w = 64, int h = 48) {
  SequenceSpec spec;
  spec.width = w;
  spec.height = h;
  spec.frame_count = frames;
  spec.seed = seed;
  spec.motion_amplitude = 3;
  return synth_sequence(spec);
}

inline CodedSequence small_coded(std::uint64_t seed, int qp = 15, int frames = 6,
                                 SearchAlgorithm algo = SearchAlgorithm::kHex) {
  const Sequence s = small_sequence(seed, frames);
  return encode_sequence(s, SearchConfig{algo, 8, qp});
}

// Straight from the definitions, with clamped sampling outside the frame.
inline int naive_sad(const Frame& cur, int x, int y, const Frame& ref, MotionVector mv) {
  int s = 0;
  for (int dy = 0; dy < 16; ++dy) {
    for (int dx = 0; dx < 16; ++dx) {
      s += std::abs(static_cast<int>(cur.at(x + dx, y + dy)) - ref.at_clamped(x + dx + mv.h, y + dy + mv.v));
    }
  }
  return s;
}

// Sum of |H D H^T| over the 4x4 tiles, halved; H written out as a matrix.
inline int naive_satd(const Frame& cur, int x, int y, const Frame& ref, MotionVector mv) {
  static constexpr int H[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  long total = 0;
  for (int ty = 0; ty < 16; ty += 4) {
    for (int tx = 0; tx < 16; tx += 4) {
      int d[4][4];
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          d[r][c] = cur.at(x + tx + c, y + ty + r) - ref.at_clamped(x + tx + c + mv.h, y + ty + r + mv.v);
        }
      }
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          long s = 0;
          for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) s += H[a][r] * d[r][c] * H[b][c];
          }
          total += std::labs(s);
        }
      }
    }
  }
  return static_cast<int>(total / 2);
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("mvglo_" + tag + "_" + std::to_string(std::rand()) + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace mvglo::testing
