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

#include "mvglo/sidecar.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mvglo/error.hpp"
#include "mvglo/provenance.hpp"

namespace mvglo {

namespace {

constexpr std::string_view kColumns =
    "frame index mv_h mv_v pmv_h pmv_v mvd_h mvd_v sad satd rd_cost mv_changed pmv_changed";

}  // namespace

void write_sidecar(std::ostream& out, const CodedSequence& coded, std::string_view provenance) {
  out << provenance << '\n';
  out << "#! mvglo-records 1\n";
  out << "#! width " << coded.width << " height " << coded.height << " frames "
      << coded.frames.size() + 1 << " qp " << coded.config.qp << " search "
      << to_string(coded.config.algorithm) << " range " << coded.config.range << " distortion "
      << to_string(coded.config.distortion) << '\n';
  out << kColumns << '\n';
  for (const auto& f : coded.frames) {
    for (const auto& r : f.records) {
      out << f.frame_index << ' ' << r.block_index << ' ' << r.mv.h << ' ' << r.mv.v << ' '
          << r.pmv.h << ' ' << r.pmv.v << ' ' << r.mvd.h << ' ' << r.mvd.v << ' ' << r.sad << ' '
          << r.satd << ' ' << format_double(r.rd_cost) << ' ' << (r.mv_changed ? 1 : 0) << ' '
          << (r.pmv_changed ? 1 : 0) << '\n';
    }
  }
}

CodedSequence read_sidecar(std::istream& in) {
  CodedSequence coded;
  int frame_count = -1;
  bool have_magic = false;
  bool have_columns = false;
  std::string line;
  std::size_t line_no = 0;

  auto bad = [&](const std::string& why) {
    fail(ErrorCode::kFormat, "sidecar line " + std::to_string(line_no) + ": " + why);
  };

  std::vector<BlockCodingRecord> pending;
  int pending_frame = -1;
  auto flush_frame = [&]() {
    if (pending_frame < 0) return;
    FrameCodingRecord f;
    f.frame_index = pending_frame;
    f.mb_cols = coded.width / kMacroblockSize;
    f.mb_rows = coded.height / kMacroblockSize;
    if (pending.size() != static_cast<std::size_t>(f.mb_cols) * f.mb_rows) {
      bad("frame " + std::to_string(pending_frame) + " has " + std::to_string(pending.size()) +
          " records");
    }
    f.records = std::move(pending);
    pending.clear();
    coded.frames.push_back(std::move(f));
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("#!", 0) == 0) {
      std::istringstream ls(line.substr(2));
      std::string key;
      while (ls >> key) {
        if (key == "mvglo-records") {
          int v = 0;
          ls >> v;
          if (v != 1) bad("unsupported sidecar version");
          have_magic = true;
          continue;
        }
        std::string value;
        if (!(ls >> value)) bad("missing value for " + key);
        try {
          if (key == "width") coded.width = std::stoi(value);
          else if (key == "height") coded.height = std::stoi(value);
          else if (key == "frames") frame_count = std::stoi(value);
          else if (key == "qp") coded.config.qp = std::stoi(value);
          else if (key == "range") coded.config.range = std::stoi(value);
          else if (key == "search") coded.config.algorithm = parse_search_algorithm(value);
          else if (key == "distortion") coded.config.distortion = parse_distortion_kind(value);
          else bad("unknown header key " + key);
        } catch (const std::logic_error&) {
          bad("bad value for " + key);
        }
      }
      continue;
    }
    if (line[0] == '#') continue;
    if (line.rfind("frame", 0) == 0) {
      have_columns = true;
      continue;
    }
    if (!have_magic || !have_columns) bad("records before header");

    std::istringstream ls(line);
    int frame = 0, mv_changed = 0, pmv_changed = 0;
    std::string cost;
    BlockCodingRecord r;
    if (!(ls >> frame >> r.block_index >> r.mv.h >> r.mv.v >> r.pmv.h >> r.pmv.v >> r.mvd.h >>
          r.mvd.v >> r.sad >> r.satd >> cost >> mv_changed >> pmv_changed)) {
      bad("expected 13 columns");
    }
    r.rd_cost = parse_double(cost);
    r.mv_changed = mv_changed != 0;
    r.pmv_changed = pmv_changed != 0;
    if (r.mvd != r.mv - r.pmv) bad("mvd != mv - pmv");
    if (frame != pending_frame) {
      flush_frame();
      if (frame != static_cast<int>(coded.frames.size()) + 1) bad("frames out of order");
      pending_frame = frame;
    }
    if (r.block_index != static_cast<int>(pending.size())) bad("blocks out of raster order");
    pending.push_back(r);
  }
  flush_frame();

  if (coded.frames.empty()) fail(ErrorCode::kEmpty, "sidecar holds no block records");
  check_frame_dimensions(coded.width, coded.height);
  if (frame_count != static_cast<int>(coded.frames.size()) + 1) {
    fail(ErrorCode::kFormat, "sidecar header frame count disagrees with its records");
  }
  coded.config.validate();
  return coded;
}

void save_coded(const CodedSequence& coded, const std::filesystem::path& records_path,
                const std::filesystem::path& recon_path, std::string_view provenance) {
  AtomicOutput rec(records_path);
  write_sidecar(rec.stream(), coded, provenance);
  std::vector<Frame> recon;
  recon.reserve(coded.frames.size() + 1);
  recon.push_back(coded.intra);
  for (const auto& f : coded.frames) recon.push_back(f.reconstructed);
  const std::filesystem::path tmp = recon_path.string() + ".tmp";
  try {
    write_yuv420(recon, tmp);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
  rec.commit();
  std::filesystem::rename(tmp, recon_path);
}

CodedSequence load_coded(const std::filesystem::path& records_path,
                         const std::filesystem::path& recon_path) {
  std::ifstream in(records_path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + records_path.string());
  CodedSequence coded = read_sidecar(in);
  Sequence recon = read_yuv420(recon_path, coded.width, coded.height);
  require(recon.size() == coded.frames.size() + 1, ErrorCode::kMisaligned,
          "reconstruction holds " + std::to_string(recon.size()) + " frames, records need " +
              std::to_string(coded.frames.size() + 1));
  coded.intra = std::move(recon.front());
  for (std::size_t k = 0; k < coded.frames.size(); ++k) {
    coded.frames[k].reconstructed = std::move(recon[k + 1]);
  }
  return coded;
}

}  // namespace mvglo
