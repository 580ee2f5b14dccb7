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

#include "mvglo/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "mvglo/error.hpp"
#include "mvglo/provenance.hpp"
#include "mvglo/rng.hpp"
#include "mvglo/stego_sim.hpp"

namespace mvglo {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void PipelineConfig::validate() const {
  require(sequences >= 2, ErrorCode::kInvalidArgument, "pipeline needs at least 2 sequences");
  require(frames >= 2, ErrorCode::kInvalidArgument, "pipeline needs at least 2 frames");
  check_frame_dimensions(width, height);
  require(!qps.empty() && !rates.empty() && !variants.empty(), ErrorCode::kInvalidArgument,
          "qp, rate and variant lists must be nonempty");
  for (const int qp : qps) require(qp >= 0 && qp <= 51, ErrorCode::kInvalidArgument, "qp out of [0, 51]");
  for (const double p : rates) EmbedConfig{p, 0}.validate();
  for (const double p : sweep_rates) EmbedConfig{p, 0}.validate();
  SearchConfig{search, range, qps.front()}.validate();
  require(n_splits >= 1, ErrorCode::kInvalidArgument, "n_splits must be >= 1");
  require(regularization >= 0.0, ErrorCode::kInvalidArgument, "regularization must be nonnegative");
  require(workers >= 0, ErrorCode::kInvalidArgument, "workers must be >= 0");
}

std::string PipelineConfig::to_json() const {
  json j;
  j["sequences"] = sequences;
  j["width"] = width;
  j["height"] = height;
  j["frames"] = frames;
  j["seed"] = seed;
  j["qps"] = qps;
  json r = json::array();
  for (const double p : rates) r.push_back(format_double(p));
  j["rates"] = r;
  json v = json::array();
  for (const Variant x : variants) v.push_back(std::string(variant_name(x)));
  j["variants"] = v;
  j["search"] = std::string(to_string(search));
  j["range"] = range;
  j["n_splits"] = n_splits;
  j["regularization"] = format_double(regularization);
  json s = json::array();
  for (const double p : sweep_rates) s.push_back(format_double(p));
  j["sweep_rates"] = s;
  j["stats"] = stats;
  return j.dump();
}

SequenceSpec sequence_spec(const PipelineConfig& cfg, int index) {
  SequenceSpec spec;
  spec.width = cfg.width;
  spec.height = cfg.height;
  spec.frame_count = cfg.frames;
  spec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(index));
  Rng rng(derive_seed(spec.seed, 0x5bec));
  spec.motion_amplitude = std::min(cfg.range, static_cast<int>(rng.uniform_int(2, 8)));
  spec.texture_scale = rng.uniform(0.5, 2.0);
  spec.noise_sigma = rng.uniform(0.5, 3.0);
  return spec;
}

std::uint64_t embed_seed(const PipelineConfig& cfg, int qp, double rate, int index) {
  const auto permille = static_cast<std::uint64_t>(std::llround(rate * 1e6));
  const std::uint64_t setting = derive_seed(cfg.seed ^ 0xe3bedULL, static_cast<std::uint64_t>(qp) * 10000019ULL + permille);
  return derive_seed(setting, static_cast<std::uint64_t>(index));
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::min(resolve_workers(workers), std::max(n, 1));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex mu;
  int failed_index = n;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (i < failed_index) {
            failed_index = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

CoverCorpus build_cover_corpus(const PipelineConfig& cfg, int qp) {
  SearchConfig sc{cfg.search, cfg.range, qp, DistortionKind::kSad};
  sc.validate();
  CoverCorpus c;
  c.originals.resize(static_cast<std::size_t>(cfg.sequences));
  c.coded.resize(static_cast<std::size_t>(cfg.sequences));
  parallel_for(cfg.sequences, cfg.workers, [&](int s) {
    const auto k = static_cast<std::size_t>(s);
    c.originals[k] = synth_sequence(sequence_spec(cfg, s), cfg.range);
    c.coded[k] = encode_sequence(c.originals[k], sc);
  });
  return c;
}

std::vector<CodedSequence> embed_corpus(const PipelineConfig& cfg, const CoverCorpus& cover, double rate) {
  std::vector<CodedSequence> out(cover.coded.size());
  parallel_for(static_cast<int>(out.size()), cfg.workers, [&](int s) {
    const auto k = static_cast<std::size_t>(s);
    const EmbedConfig ec{rate, embed_seed(cfg, cover.coded[k].config.qp, rate, s)};
    out[k] = embed(cover.coded[k], cover.originals[k], ec);
  });
  return out;
}

namespace {

std::string sequence_id(int s) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "seq%03d", s);
  return buf;
}

class Writer {
 public:
  Writer(fs::path dir, std::string provenance) : dir_(std::move(dir)), provenance_(std::move(provenance)) {}

  template <typename Fn>
  void write(const std::string& name, Fn&& fn) {
    AtomicOutput out(dir_ / name);
    fn(out.stream(), provenance_);
    out.commit();
    written.push_back(dir_ / name);
  }

  std::vector<fs::path> written;

 private:
  fs::path dir_;
  std::string provenance_;
};

PipelineResult run_pipeline_impl(const PipelineConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);
  const std::string config_text = cfg.to_json();
  Writer writer(out_dir, provenance_line(config_text, "base=" + std::to_string(cfg.seed)));
  PipelineResult result;

  json manifest;
  manifest["tool"] = "mvglo";
  manifest["version"] = std::string(version());
  manifest["config"] = json::parse(config_text);
  json seqs = json::array();
  for (int s = 0; s < cfg.sequences; ++s) {
    const SequenceSpec spec = sequence_spec(cfg, s);
    json e;
    e["id"] = sequence_id(s);
    e["seed"] = spec.seed;
    e["motion_amplitude"] = spec.motion_amplitude;
    e["texture_scale"] = format_double(spec.texture_scale);
    e["noise_sigma"] = format_double(spec.noise_sigma);
    json embeds = json::object();
    for (const int qp : cfg.qps) {
      for (const double p : cfg.rates) {
        embeds["qp" + std::to_string(qp) + "_p" + format_double(p)] = embed_seed(cfg, qp, p, s);
      }
    }
    e["embed_seeds"] = embeds;
    seqs.push_back(e);
  }
  manifest["sequences"] = seqs;
  json split_seeds = json::array();
  for (int k = 0; k < cfg.n_splits; ++k) split_seeds.push_back(derive_seed(cfg.seed ^ 0x5b117ULL, static_cast<std::uint64_t>(k)));
  manifest["split_seeds"] = split_seeds;
  writer.write("manifest.json", [&](std::ostream& out, const std::string&) { out << manifest.dump(2) << '\n'; });

  const TrainOptions options{cfg.regularization};
  for (const int qp : cfg.qps) {
    const CoverCorpus cover = build_cover_corpus(cfg, qp);
    const double lambda = lambda_of_qp(qp).lambda;

    std::vector<FeatureSet> cover_features(cover.coded.size());
    parallel_for(cfg.sequences, cfg.workers, [&](int s) {
      const auto k = static_cast<std::size_t>(s);
      cover_features[k] = compute_features(sequence_cost_matrices(cover.coded[k], lambda));
    });

    if (cfg.stats) {
      const auto sweep = change_rate_sweep(cover.coded, cover.originals, cfg.sweep_rates,
                                           derive_seed(cfg.seed ^ 0x5eedULL, static_cast<std::uint64_t>(qp)));
      writer.write(stats_file_name("change_rates", qp, "sweep"),
                   [&](std::ostream& out, const std::string& prov) { write_sweep_csv(out, sweep, prov); });
      const auto heat = optimality_heatmaps(cover.coded, HeatmapDirection::kMv);
      writer.write(stats_file_name("heatmap_cover_mv", qp, "0"),
                   [&](std::ostream& out, const std::string& prov) { write_heatmap_csv(out, heat, prov); });
    }

    for (const double p : cfg.rates) {
      const std::vector<CodedSequence> stego = embed_corpus(cfg, cover, p);
      std::vector<FeatureSet> stego_features(stego.size());
      parallel_for(cfg.sequences, cfg.workers, [&](int s) {
        const auto k = static_cast<std::size_t>(s);
        stego_features[k] = compute_features(sequence_cost_matrices(stego[k], lambda));
      });

      if (cfg.stats) {
        const FourCaseReport fc = four_case_report(cover.coded, stego, p);
        writer.write(stats_file_name("four_case", qp, format_double(p)),
                     [&](std::ostream& out, const std::string& prov) { write_four_case_csv(out, fc, prov); });
        const auto heat = optimality_heatmaps(stego, HeatmapDirection::kPmv);
        writer.write(stats_file_name("heatmap_stego_pmv", qp, format_double(p)),
                     [&](std::ostream& out, const std::string& prov) { write_heatmap_csv(out, heat, prov); });
      }

      for (const Variant v : cfg.variants) {
        std::vector<FeatureRow> rows;
        for (int s = 0; s < cfg.sequences; ++s) {
          const auto k = static_cast<std::size_t>(s);
          rows.push_back({0, v, sequence_id(s), select_variant(cover_features[k], v).values});
          rows.push_back({1, v, sequence_id(s), select_variant(stego_features[k], v).values});
        }
        const std::string name = "features_" + std::string(variant_name(v)) + "_qp" + std::to_string(qp) +
                                 "_p" + format_double(p) + ".csv";
        writer.write(name, [&](std::ostream& out, const std::string& prov) { write_feature_csv(out, rows, prov); });

        CorpusManifest m = manifest_from_rows(rows);
        m.qp = qp;
        m.rate = p;
        m.seed = cfg.seed;
        ReportRow row{v, qp, p, run_experiment(m, cfg.n_splits, cfg.seed ^ 0x5b117ULL, options), cfg.n_splits};
        result.report.push_back(std::move(row));
      }
    }
  }

  writer.write("report.csv",
               [&](std::ostream& out, const std::string& prov) { write_report_csv(out, result.report, prov); });
  result.outputs = writer.written;
  return result;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, const fs::path& out_dir) {
  try {
    return run_pipeline_impl(cfg, out_dir);
  } catch (const std::exception& e) {
    std::error_code ec;
    if (fs::is_directory(out_dir, ec)) write_failure_marker(out_dir / "report.csv", e.what());
    throw;
  }
}

}  // namespace mvglo
