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

#include "mvglo/codec_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mvglo/error.hpp"

namespace mvglo {

BlockView BlockView::in_frame(const Frame& frame, int x, int y) {
  require(x >= 0 && y >= 0 && x + kMacroblockSize <= frame.width &&
              y + kMacroblockSize <= frame.height,
          ErrorCode::kDimension,
          "block at (" + std::to_string(x) + "," + std::to_string(y) + ") exits the frame");
  return {frame.luma.data() + static_cast<std::ptrdiff_t>(y) * frame.width + x, frame.width, x, y};
}

BlockView fetch_predicted(const Frame& reference, int x, int y, MotionVector mv, Block& scratch) {
  const int px = x + mv.h;
  const int py = y + mv.v;
  if (px >= 0 && py >= 0 && px + kMacroblockSize <= reference.width &&
      py + kMacroblockSize <= reference.height) {
    return BlockView::in_frame(reference, px, py);
  }
  for (int dy = 0; dy < kMacroblockSize; ++dy) {
    const int sy = std::clamp(py + dy, 0, reference.height - 1);
    const std::uint8_t* row = reference.luma.data() + static_cast<std::ptrdiff_t>(sy) * reference.width;
    for (int dx = 0; dx < kMacroblockSize; ++dx) {
      scratch[dy * kMacroblockSize + dx] = row[std::clamp(px + dx, 0, reference.width - 1)];
    }
  }
  return BlockView::of(scratch, px, py);
}

Block copy_block(BlockView view) {
  Block out;
  for (int dy = 0; dy < kMacroblockSize; ++dy) {
    for (int dx = 0; dx < kMacroblockSize; ++dx) out[dy * kMacroblockSize + dx] = view(dx, dy);
  }
  return out;
}

void write_block(Frame& frame, int x, int y, const Block& block) {
  require(x >= 0 && y >= 0 && x + kMacroblockSize <= frame.width && y + kMacroblockSize <= frame.height,
          ErrorCode::kDimension, "block write exits the frame");
  for (int dy = 0; dy < kMacroblockSize; ++dy) {
    std::copy_n(block.begin() + dy * kMacroblockSize, kMacroblockSize,
                frame.luma.begin() + static_cast<std::ptrdiff_t>(y + dy) * frame.width + x);
  }
}

int sad(BlockView a, BlockView b) {
  int total = 0;
  for (int dy = 0; dy < kMacroblockSize; ++dy) {
    const std::uint8_t* ra = a.samples + dy * a.stride;
    const std::uint8_t* rb = b.samples + dy * b.stride;
    for (int dx = 0; dx < kMacroblockSize; ++dx) total += std::abs(ra[dx] - rb[dx]);
  }
  return total;
}

int satd(BlockView a, BlockView b) {
  int total = 0;
  for (int ty = 0; ty < kMacroblockSize; ty += 4) {
    for (int tx = 0; tx < kMacroblockSize; tx += 4) {
      int d[4][4];
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) d[r][c] = a(tx + c, ty + r) - b(tx + c, ty + r);
      }
      // Rows then columns; butterfly form of H * D * H^T.
      for (int r = 0; r < 4; ++r) {
        const int s01 = d[r][0] + d[r][1], d01 = d[r][0] - d[r][1];
        const int s23 = d[r][2] + d[r][3], d23 = d[r][2] - d[r][3];
        d[r][0] = s01 + s23;
        d[r][1] = s01 - s23;
        d[r][2] = d01 - d23;
        d[r][3] = d01 + d23;
      }
      for (int c = 0; c < 4; ++c) {
        const int s01 = d[0][c] + d[1][c], d01 = d[0][c] - d[1][c];
        const int s23 = d[2][c] + d[3][c], d23 = d[2][c] - d[3][c];
        total += std::abs(s01 + s23) + std::abs(s01 - s23) + std::abs(d01 - d23) + std::abs(d01 + d23);
      }
    }
  }
  return total / 2;
}

LagrangeMultiplier lambda_of_qp(int qp) {
  require(qp >= kMinQp && qp <= kMaxQp, ErrorCode::kInvalidArgument,
          "qp " + std::to_string(qp) + " outside [0, 51]");
  return {qp, std::sqrt(0.85 * std::exp2((qp - 12) / 3.0))};
}

double qstep_of_qp(int qp) {
  require(qp >= kMinQp && qp <= kMaxQp, ErrorCode::kInvalidArgument,
          "qp " + std::to_string(qp) + " outside [0, 51]");
  return 0.625 * std::exp2(qp / 6.0);
}

namespace {

struct Dct4 {
  double m[4][4];
  Dct4() {
    for (int k = 0; k < 4; ++k) {
      const double scale = k == 0 ? 0.5 : std::sqrt(0.5);
      for (int n = 0; n < 4; ++n) m[k][n] = scale * std::cos((2 * n + 1) * k * std::numbers::pi / 8.0);
    }
  }
};

const Dct4& dct4() {
  static const Dct4 table;
  return table;
}

}  // namespace

Block quantize_reconstruct(BlockView current, BlockView predicted, int qp) {
  const double step = qstep_of_qp(qp);
  const auto& c = dct4().m;
  Block out;
  for (int ty = 0; ty < kMacroblockSize; ty += 4) {
    for (int tx = 0; tx < kMacroblockSize; tx += 4) {
      double r[4][4];
      for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) r[y][x] = current(tx + x, ty + y) - predicted(tx + x, ty + y);
      }
      // coef = C * R * C^T
      double tmp[4][4];
      for (int k = 0; k < 4; ++k) {
        for (int x = 0; x < 4; ++x) {
          double s = 0.0;
          for (int y = 0; y < 4; ++y) s += c[k][y] * r[y][x];
          tmp[k][x] = s;
        }
      }
      double coef[4][4];
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int x = 0; x < 4; ++x) s += tmp[k][x] * c[l][x];
          coef[k][l] = std::round(s / step) * step;
        }
      }
      // R' = C^T * coef * C
      for (int y = 0; y < 4; ++y) {
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int k = 0; k < 4; ++k) s += c[k][y] * coef[k][l];
          tmp[y][l] = s;
        }
      }
      for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
          double s = 0.0;
          for (int l = 0; l < 4; ++l) s += tmp[y][l] * c[l][x];
          const long v = predicted(tx + x, ty + y) + std::lround(s);
          out[(ty + y) * kMacroblockSize + tx + x] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
        }
      }
    }
  }
  return out;
}

}  // namespace mvglo
