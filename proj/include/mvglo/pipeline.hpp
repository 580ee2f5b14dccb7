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
#include <functional>
#include <string>
#include <vector>

#include "mvglo/eval_harness.hpp"
#include "mvglo/glo_features.hpp"
#include "mvglo/motion_search.hpp"
#include "mvglo/stats_probe.hpp"
#include "mvglo/video_io.hpp"

namespace mvglo {

struct PipelineConfig {
  int sequences = 60;
  int width = 176;
  int height = 144;
  int frames = 32;
  std::uint64_t seed = 1;
  std::vector<int> qps{15, 25};
  std::vector<double> rates{0.1, 0.4};
  std::vector<Variant> variants{Variant::kAoso18, Variant::kNpe36, Variant::kGlo64};
  SearchAlgorithm search = SearchAlgorithm::kHex;
  int range = 16;
  int n_splits = 20;
  double regularization = 1e-2;
  std::vector<double> sweep_rates{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  bool stats = true;
  int workers = 0;  // 0: hardware concurrency

  void validate() const;
  /// Canonical JSON of every config value; hashed into provenance lines.
  std::string to_json() const;
};

/// Synthetic spec of sequence `index`; motion, texture and noise vary per sequence.
SequenceSpec sequence_spec(const PipelineConfig& cfg, int index);
std::uint64_t embed_seed(const PipelineConfig& cfg, int qp, double rate, int index);

int resolve_workers(int requested);

/// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
/// (lowest index) is rethrown after all threads join.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

struct CoverCorpus {
  std::vector<Sequence> originals;
  std::vector<CodedSequence> coded;
};

CoverCorpus build_cover_corpus(const PipelineConfig& cfg, int qp);
std::vector<CodedSequence> embed_corpus(const PipelineConfig& cfg, const CoverCorpus& cover, double rate);

struct PipelineResult {
  std::vector<ReportRow> report;
  std::vector<std::filesystem::path> outputs;
};

/// Writes manifest.json, features_*.csv, report.csv and stats_*.csv into
/// out_dir. On failure a report.csv.FAILED marker is left and the error rethrown.
PipelineResult run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace mvglo
