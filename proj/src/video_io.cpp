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

#include "mvglo/video_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "mvglo/error.hpp"
#include "mvglo/rng.hpp"

namespace mvglo {

void check_frame_dimensions(int width, int height) {
  require(width > 0 && height > 0 && width % kMacroblockSize == 0 &&
              height % kMacroblockSize == 0,
          ErrorCode::kDimension,
          "frame dimensions must be positive multiples of 16, got " + std::to_string(width) +
              "x" + std::to_string(height));
}

Frame::Frame(int w, int h, std::uint8_t luma_fill, std::uint8_t chroma_fill) : width(w), height(h) {
  check_frame_dimensions(w, h);
  luma.assign(static_cast<std::size_t>(w) * h, luma_fill);
  chroma_u.assign(static_cast<std::size_t>(w / 2) * (h / 2), chroma_fill);
  chroma_v.assign(static_cast<std::size_t>(w / 2) * (h / 2), chroma_fill);
}

std::uint8_t Frame::at_clamped(int x, int y) const {
  return at(std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1));
}

void SequenceSpec::validate(int max_search_range) const {
  check_frame_dimensions(width, height);
  require(frame_count >= 2, ErrorCode::kInvalidArgument, "frame_count must be >= 2");
  require(motion_amplitude >= 0 && motion_amplitude <= max_search_range,
          ErrorCode::kInvalidArgument,
          "motion_amplitude must lie in [0, search range " + std::to_string(max_search_range) + "]");
  require(std::isfinite(texture_scale) && texture_scale > 0.0, ErrorCode::kInvalidArgument,
          "texture_scale must be positive");
  require(std::isfinite(noise_sigma) && noise_sigma >= 0.0, ErrorCode::kInvalidArgument,
          "noise_sigma must be nonnegative");
  require(flat_probability >= 0.0 && flat_probability <= 1.0, ErrorCode::kInvalidArgument,
          "flat_probability must lie in [0, 1]");
}

Sequence read_yuv420(const std::filesystem::path& path, int width, int height) {
  check_frame_dimensions(width, height);
  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec) fail(ErrorCode::kIo, "cannot stat " + path.string() + ": " + ec.message());

  const std::size_t frame_bytes = static_cast<std::size_t>(width) * height * 3 / 2;
  if (file_size % frame_bytes != 0) {
    fail(ErrorCode::kSizeMismatch, path.string() + ": size " + std::to_string(file_size) +
                                       " is not a whole number of " + std::to_string(width) +
                                       "x" + std::to_string(height) + " frames");
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());

  const std::size_t count = file_size / frame_bytes;
  Sequence frames;
  frames.reserve(count);
  auto read_plane = [&](std::vector<std::uint8_t>& plane) {
    in.read(reinterpret_cast<char*>(plane.data()), static_cast<std::streamsize>(plane.size()));
    if (!in) fail(ErrorCode::kIo, "short read from " + path.string());
  };
  for (std::size_t i = 0; i < count; ++i) {
    Frame f(width, height);
    read_plane(f.luma);
    read_plane(f.chroma_u);
    read_plane(f.chroma_v);
    frames.push_back(std::move(f));
  }
  return frames;
}

void write_yuv420(std::span<const Frame> frames, const std::filesystem::path& path) {
  for (const Frame& f : frames) {
    if (f.width != frames.front().width || f.height != frames.front().height) {
      fail(ErrorCode::kMixedDimension, "cannot write frames of differing dimensions");
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  for (const Frame& f : frames) {
    for (const auto* plane : {&f.luma, &f.chroma_u, &f.chroma_v}) {
      out.write(reinterpret_cast<const char*>(plane->data()),
                static_cast<std::streamsize>(plane->size()));
    }
  }
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

namespace {

// Smooth value noise on an integer lattice, output in [0, 1].
class ValueNoise {
 public:
  ValueNoise(std::uint64_t seed, double spacing) : seed_(seed), inv_spacing_(1.0 / spacing) {}

  double operator()(double x, double y) const {
    const double fx = x * inv_spacing_;
    const double fy = y * inv_spacing_;
    const double x0 = std::floor(fx);
    const double y0 = std::floor(fy);
    const double tx = smooth(fx - x0);
    const double ty = smooth(fy - y0);
    const auto ix = static_cast<std::int64_t>(x0);
    const auto iy = static_cast<std::int64_t>(y0);
    const double a = lattice(ix, iy);
    const double b = lattice(ix + 1, iy);
    const double c = lattice(ix, iy + 1);
    const double d = lattice(ix + 1, iy + 1);
    return (a + (b - a) * tx) * (1.0 - ty) + (c + (d - c) * tx) * ty;
  }

 private:
  static double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

  double lattice(std::int64_t ix, std::int64_t iy) const {
    const std::uint64_t h = mix64(seed_ ^ mix64(static_cast<std::uint64_t>(ix) * 0x9E3779B1ULL +
                                                 static_cast<std::uint64_t>(iy)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed_;
  double inv_spacing_;
};

struct Layer {
  int x0 = 0, y0 = 0, w = 0, h = 0;  // w == 0 marks the full-frame background
  int vx = 0, vy = 0;
  double mean = 128.0;
  double contrast = 0.0;
  ValueNoise coarse{0, 1.0};
  ValueNoise fine{0, 1.0};

  double texture(double u, double v) const {
    const double n = 0.7 * coarse(u, v) + 0.3 * fine(u, v);
    return mean + contrast * (2.0 * n - 1.0);
  }
};

Layer make_layer(Rng& rng, const SequenceSpec& spec, bool background) {
  Layer layer;
  const int a = spec.motion_amplitude;
  layer.vx = static_cast<int>(rng.uniform_int(-a, a));
  layer.vy = static_cast<int>(rng.uniform_int(-a, a));
  if (!background) {
    layer.w = static_cast<int>(rng.uniform_int(16, 48));
    layer.h = static_cast<int>(rng.uniform_int(16, 48));
    layer.x0 = static_cast<int>(rng.uniform_int(0, spec.width - 1));
    layer.y0 = static_cast<int>(rng.uniform_int(0, spec.height - 1));
  }
  layer.mean = rng.uniform(60.0, 196.0);
  // Mixture of nearly flat and strongly textured surfaces.
  layer.contrast = rng.uniform() < spec.flat_probability ? rng.uniform(2.0, 8.0) : rng.uniform(25.0, 60.0);
  const double spacing = 10.0 / spec.texture_scale;
  layer.coarse = ValueNoise(rng.next(), spacing);
  layer.fine = ValueNoise(rng.next(), spacing / 3.0);
  return layer;
}

int wrap(int v, int m) {
  const int r = v % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Sequence synth_sequence(const SequenceSpec& spec, int max_search_range) {
  spec.validate(max_search_range);
  Rng rng(derive_seed(spec.seed, 0x5eed));

  std::vector<Layer> layers;
  layers.push_back(make_layer(rng, spec, true));
  const int objects = std::max(4, spec.width * spec.height / 1024);
  for (int k = 0; k < objects; ++k) layers.push_back(make_layer(rng, spec, false));

  Rng noise_rng(derive_seed(spec.seed, 0x7015e));
  Sequence frames;
  frames.reserve(static_cast<std::size_t>(spec.frame_count));
  std::vector<double> canvas(static_cast<std::size_t>(spec.width) * spec.height);

  for (int t = 0; t < spec.frame_count; ++t) {
    const Layer& bg = layers.front();
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        canvas[static_cast<std::size_t>(y) * spec.width + x] =
            bg.texture(x - t * bg.vx, y - t * bg.vy);
      }
    }
    for (std::size_t k = 1; k < layers.size(); ++k) {
      const Layer& obj = layers[k];
      const int ox = obj.x0 + t * obj.vx;
      const int oy = obj.y0 + t * obj.vy;
      for (int ly = 0; ly < obj.h; ++ly) {
        const int y = wrap(oy + ly, spec.height);
        for (int lx = 0; lx < obj.w; ++lx) {
          const int x = wrap(ox + lx, spec.width);
          canvas[static_cast<std::size_t>(y) * spec.width + x] = obj.texture(lx, ly);
        }
      }
    }

    Frame frame(spec.width, spec.height);
    for (std::size_t i = 0; i < canvas.size(); ++i) {
      double v = canvas[i];
      if (spec.noise_sigma > 0.0) v += spec.noise_sigma * noise_rng.normal();
      frame.luma[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
    // Chroma follows the 2x2 luma mean so that planes carry content.
    for (int cy = 0; cy < spec.height / 2; ++cy) {
      for (int cx = 0; cx < spec.width / 2; ++cx) {
        const int sum = frame.at(2 * cx, 2 * cy) + frame.at(2 * cx + 1, 2 * cy) +
                        frame.at(2 * cx, 2 * cy + 1) + frame.at(2 * cx + 1, 2 * cy + 1);
        const auto idx = static_cast<std::size_t>(cy) * (spec.width / 2) + cx;
        frame.chroma_u[idx] = static_cast<std::uint8_t>(128 + (sum / 4 - 128) / 4);
        frame.chroma_v[idx] = static_cast<std::uint8_t>(128 - (sum / 4 - 128) / 4);
      }
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace mvglo
