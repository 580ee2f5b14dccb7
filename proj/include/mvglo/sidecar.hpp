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

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "mvglo/motion_search.hpp"

namespace mvglo {

// Text sidecar standing in for a bitstream. Layout:
//
//   # mvglo <version> config=<hash> seeds=<seeds>
//   #! mvglo-records 1
//   #! width W height H frames N qp Q search hex range R distortion sad
//   frame index mv_h mv_v pmv_h pmv_v mvd_h mvd_v sad satd rd_cost mv_changed pmv_changed
//   <one row per macroblock of frames 1..N-1, raster order>
//
// Reconstructed pictures travel separately as raw I420 with N frames.

void write_sidecar(std::ostream& out, const CodedSequence& coded, std::string_view provenance);

/// Parses a sidecar; reconstructions are left empty. Throws kEmpty for a
/// file without records and kFormat for malformed content.
CodedSequence read_sidecar(std::istream& in);

void save_coded(const CodedSequence& coded, const std::filesystem::path& records_path,
                const std::filesystem::path& recon_path, std::string_view provenance);

CodedSequence load_coded(const std::filesystem::path& records_path,
                         const std::filesystem::path& recon_path);

}  // namespace mvglo
