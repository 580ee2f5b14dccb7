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
#include <span>
#include <string_view>

#include "mvglo/motion_search.hpp"

namespace mvglo {

enum class ComponentMode { kEither, kHorizontalOnly, kVerticalOnly };

std::string_view to_string(ComponentMode m);
ComponentMode parse_component_mode(std::string_view name);

struct EmbedConfig {
  double change_rate = 0.0;
  std::uint64_t seed = 0;
  ComponentMode component_mode = ComponentMode::kEither;

  void validate() const;
};

enum class CaseLabel { kCase1 = 1, kCase2 = 2, kCase3 = 3, kCase4 = 4 };

/// +-1 embedding simulation. Exactly round(change_rate * N) of the N inter
/// MVs are picked uniformly and nudged by +-1 on one component; PMVs, MVDs,
/// residuals and reconstructions are then re-derived in coding order, so
/// the result is what a decoder of the stego stream would see. Flags carry
/// the ground truth against `cover`.
CodedSequence embed(const CodedSequence& cover, std::span<const Frame> original, const EmbedConfig& cfg);

/// Case 1: nothing changed; 2: MV only; 3: PMV only; 4: both.
CaseLabel classify_case(const BlockCodingRecord& cover, const BlockCodingRecord& stego);

struct ChangeRates {
  double mv = 0.0;
  double pmv = 0.0;
  double bitrate = 0.0;  // blocks whose MVD bit count differs
};

ChangeRates change_rates(const CodedSequence& cover, const CodedSequence& stego);
ChangeRates change_rates(std::span<const CodedSequence> cover, std::span<const CodedSequence> stego);

double bitrate_change_rate(const CodedSequence& cover, const CodedSequence& stego);

/// Throws kMisaligned unless both sequences have the same frame/block layout.
void check_aligned(const CodedSequence& cover, const CodedSequence& stego);

}  // namespace mvglo
