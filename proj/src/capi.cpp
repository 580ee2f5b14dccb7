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

#include "mvglo/mvglo.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "mvglo/error.hpp"
#include "mvglo/eval_harness.hpp"
#include "mvglo/glo_features.hpp"
#include "mvglo/pipeline.hpp"
#include "mvglo/provenance.hpp"
#include "mvglo/sidecar.hpp"
#include "mvglo/stats_probe.hpp"
#include "mvglo/stego_sim.hpp"
#include "mvglo/video_io.hpp"

struct mvglo_sequence {
  mvglo::Sequence frames;
};

struct mvglo_coded {
  mvglo::CodedSequence coded;
};

namespace {

namespace fs = std::filesystem;
using mvglo::ErrorCode;

thread_local std::string g_last_error;

template <typename Fn>
mvglo_status guarded(Fn&& fn, const char* marker_target = nullptr) {
  g_last_error.clear();
  mvglo_status status = MVGLO_OK;
  try {
    fn();
    return MVGLO_OK;
  } catch (const mvglo::Error& e) {
    g_last_error = e.what();
    status = static_cast<mvglo_status>(static_cast<int>(e.code()));
  } catch (const fs::filesystem_error& e) {
    g_last_error = e.what();
    status = MVGLO_E_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    status = MVGLO_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    status = MVGLO_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    status = MVGLO_E_INTERNAL;
  }
  if (marker_target != nullptr && *marker_target != '\0') {
    try {
      mvglo::write_failure_marker(marker_target, g_last_error);
    } catch (...) {
    }
  }
  return status;
}

void need(const void* p, const char* what) {
  mvglo::require(p != nullptr, ErrorCode::kInvalidArgument, std::string(what) + " must not be null");
}

mvglo::SearchAlgorithm to_algorithm(mvglo_search s) {
  switch (s) {
    case MVGLO_SEARCH_ESA: return mvglo::SearchAlgorithm::kEsa;
    case MVGLO_SEARCH_DIA: return mvglo::SearchAlgorithm::kDia;
    case MVGLO_SEARCH_HEX: return mvglo::SearchAlgorithm::kHex;
  }
  mvglo::fail(ErrorCode::kInvalidArgument, "unknown search algorithm");
}

mvglo::DistortionKind to_distortion(mvglo_distortion d) {
  switch (d) {
    case MVGLO_DIST_SAD: return mvglo::DistortionKind::kSad;
    case MVGLO_DIST_SATD: return mvglo::DistortionKind::kSatd;
  }
  mvglo::fail(ErrorCode::kInvalidArgument, "unknown distortion kind");
}

mvglo::ComponentMode to_component(mvglo_component c) {
  switch (c) {
    case MVGLO_COMPONENT_EITHER: return mvglo::ComponentMode::kEither;
    case MVGLO_COMPONENT_HORIZONTAL: return mvglo::ComponentMode::kHorizontalOnly;
    case MVGLO_COMPONENT_VERTICAL: return mvglo::ComponentMode::kVerticalOnly;
  }
  mvglo::fail(ErrorCode::kInvalidArgument, "unknown component mode");
}

mvglo::SequenceSpec to_spec(const mvglo_synth_params& p) {
  mvglo::SequenceSpec s;
  s.width = p.width;
  s.height = p.height;
  s.frame_count = p.frames;
  s.seed = p.seed;
  s.motion_amplitude = p.motion_amplitude;
  s.texture_scale = p.texture_scale;
  s.noise_sigma = p.noise_sigma;
  s.flat_probability = p.flat_probability;
  return s;
}

mvglo::SearchConfig to_search(const mvglo_search_params& p) {
  mvglo::SearchConfig c{to_algorithm(p.algorithm), p.range, p.qp, to_distortion(p.distortion)};
  c.validate();
  return c;
}

std::string prov(const std::string& config, const std::string& seeds = "") {
  return mvglo::provenance_line(config, seeds);
}

template <typename Fn>
void write_text(const fs::path& path, Fn&& fn) {
  mvglo::AtomicOutput out(path);
  fn(out.stream());
  out.commit();
}

std::string q(const char* s) { return s ? s : ""; }

}  // namespace

extern "C" {

const char* mvglo_version(void) { return MVGLO_VERSION_STRING; }

const char* mvglo_status_name(mvglo_status status) {
  if (status == MVGLO_OK) return "ok";
  if (status == MVGLO_E_INTERNAL) return "internal";
  if (status >= MVGLO_E_INVALID_ARGUMENT && status <= MVGLO_E_NON_FINITE) {
    return mvglo::error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
  }
  return "unknown";
}

const char* mvglo_last_error(void) { return g_last_error.c_str(); }

double mvglo_lambda(int qp) {
  double out = 0.0;
  if (guarded([&] { out = mvglo::lambda_of_qp(qp).lambda; }) != MVGLO_OK) return -1.0;
  return out;
}

int mvglo_mvd_bits(int component) { return mvglo::exp_golomb_se_bits(component); }

size_t mvglo_variant_dimension(const char* variant) {
  size_t out = 0;
  guarded([&] {
    need(variant, "variant");
    out = mvglo::variant_dimension(mvglo::parse_variant(variant));
  });
  return out;
}

void mvglo_synth_params_default(mvglo_synth_params* params) {
  if (params == nullptr) return;
  const mvglo::SequenceSpec s;
  *params = {s.width, s.height, s.frame_count, s.seed, s.motion_amplitude, s.texture_scale, s.noise_sigma,
             s.flat_probability};
}

mvglo_status mvglo_sequence_synth(const mvglo_synth_params* params, mvglo_sequence** out) {
  return guarded([&] {
    need(params, "params");
    need(out, "out");
    auto seq = std::make_unique<mvglo_sequence>();
    seq->frames = mvglo::synth_sequence(to_spec(*params));
    *out = seq.release();
  });
}

mvglo_status mvglo_sequence_read(const char* path, int width, int height, mvglo_sequence** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto seq = std::make_unique<mvglo_sequence>();
    seq->frames = mvglo::read_yuv420(path, width, height);
    *out = seq.release();
  });
}

mvglo_status mvglo_sequence_write(const mvglo_sequence* seq, const char* path) {
  return guarded([&] {
    need(seq, "sequence");
    need(path, "path");
    mvglo::write_yuv420(seq->frames, path);
  });
}

int mvglo_sequence_width(const mvglo_sequence* seq) {
  return seq && !seq->frames.empty() ? seq->frames.front().width : 0;
}
int mvglo_sequence_height(const mvglo_sequence* seq) {
  return seq && !seq->frames.empty() ? seq->frames.front().height : 0;
}
int mvglo_sequence_frames(const mvglo_sequence* seq) { return seq ? static_cast<int>(seq->frames.size()) : 0; }

mvglo_status mvglo_sequence_luma(const mvglo_sequence* seq, int frame, uint8_t* buf, size_t size) {
  return guarded([&] {
    need(seq, "sequence");
    need(buf, "buffer");
    mvglo::require(frame >= 0 && static_cast<size_t>(frame) < seq->frames.size(), ErrorCode::kInvalidArgument,
                   "frame index out of range");
    const auto& luma = seq->frames[static_cast<size_t>(frame)].luma;
    mvglo::require(size >= luma.size(), ErrorCode::kSizeMismatch, "buffer too small for one luma plane");
    std::memcpy(buf, luma.data(), luma.size());
  });
}

void mvglo_sequence_free(mvglo_sequence* seq) { delete seq; }

void mvglo_search_params_default(mvglo_search_params* params) {
  if (params == nullptr) return;
  *params = {MVGLO_SEARCH_HEX, 16, 15, MVGLO_DIST_SAD};
}

mvglo_status mvglo_encode(const mvglo_sequence* seq, const mvglo_search_params* params, mvglo_coded** out) {
  return guarded([&] {
    need(seq, "sequence");
    need(params, "params");
    need(out, "out");
    auto coded = std::make_unique<mvglo_coded>();
    coded->coded = mvglo::encode_sequence(seq->frames, to_search(*params));
    *out = coded.release();
  });
}

mvglo_status mvglo_embed(const mvglo_coded* cover, const mvglo_sequence* original, double rate, uint64_t seed,
                         mvglo_component component, mvglo_coded** out) {
  return guarded([&] {
    need(cover, "cover");
    need(original, "original");
    need(out, "out");
    auto coded = std::make_unique<mvglo_coded>();
    coded->coded = mvglo::embed(cover->coded, original->frames, {rate, seed, to_component(component)});
    *out = coded.release();
  });
}

mvglo_status mvglo_coded_load(const char* records_path, const char* recon_path, mvglo_coded** out) {
  return guarded([&] {
    need(records_path, "records path");
    need(recon_path, "recon path");
    need(out, "out");
    auto coded = std::make_unique<mvglo_coded>();
    coded->coded = mvglo::load_coded(records_path, recon_path);
    *out = coded.release();
  });
}

mvglo_status mvglo_coded_save(const mvglo_coded* coded, const char* records_path, const char* recon_path) {
  return guarded([&] {
    need(coded, "coded");
    need(records_path, "records path");
    need(recon_path, "recon path");
    mvglo::save_coded(coded->coded, records_path, recon_path, prov("coded_save"));
  });
}

int mvglo_coded_frames(const mvglo_coded* coded) { return coded ? static_cast<int>(coded->coded.frames.size()) : 0; }

int mvglo_coded_blocks_per_frame(const mvglo_coded* coded) {
  if (coded == nullptr || coded->coded.frames.empty()) return 0;
  return static_cast<int>(coded->coded.frames.front().records.size());
}

mvglo_status mvglo_coded_record(const mvglo_coded* coded, int inter_frame, int block, mvglo_block_record* out) {
  return guarded([&] {
    need(coded, "coded");
    need(out, "out");
    const auto& frames = coded->coded.frames;
    mvglo::require(inter_frame >= 0 && static_cast<size_t>(inter_frame) < frames.size(),
                   ErrorCode::kInvalidArgument, "frame index out of range");
    const auto& f = frames[static_cast<size_t>(inter_frame)];
    mvglo::require(block >= 0 && static_cast<size_t>(block) < f.records.size(), ErrorCode::kInvalidArgument,
                   "block index out of range");
    const auto& r = f.records[static_cast<size_t>(block)];
    *out = {f.frame_index, r.block_index, r.mv.h, r.mv.v, r.pmv.h, r.pmv.v, r.mvd.h, r.mvd.v,
            r.sad, r.satd, r.rd_cost, r.mv_changed ? 1 : 0, r.pmv_changed ? 1 : 0};
  });
}

void mvglo_coded_free(mvglo_coded* coded) { delete coded; }

mvglo_status mvglo_change_rates(const mvglo_coded* cover, const mvglo_coded* stego, double* mv_rate,
                                double* pmv_rate, double* bitrate_rate) {
  return guarded([&] {
    need(cover, "cover");
    need(stego, "stego");
    const auto r = mvglo::change_rates(cover->coded, stego->coded);
    if (mv_rate) *mv_rate = r.mv;
    if (pmv_rate) *pmv_rate = r.pmv;
    if (bitrate_rate) *bitrate_rate = r.bitrate;
  });
}

mvglo_status mvglo_extract(const mvglo_coded* coded, const char* variant, double* values, size_t capacity,
                           size_t* dimension) {
  return guarded([&] {
    need(coded, "coded");
    need(variant, "variant");
    const auto fv = mvglo::extract(coded->coded, mvglo::parse_variant(variant));
    if (dimension) *dimension = fv.values.size();
    if (values) std::memcpy(values, fv.values.data(), std::min(capacity, fv.values.size()) * sizeof(double));
  });
}

mvglo_status mvglo_run_synth(const mvglo_synth_params* params, const char* yuv_out) {
  return guarded(
      [&] {
        need(params, "params");
        need(yuv_out, "output path");
        const auto frames = mvglo::synth_sequence(to_spec(*params));
        const fs::path tmp = std::string(yuv_out) + ".tmp";
        mvglo::write_yuv420(frames, tmp);
        fs::rename(tmp, yuv_out);
      },
      yuv_out);
}

mvglo_status mvglo_run_encode(const char* yuv_in, int width, int height, const mvglo_search_params* params,
                              const char* records_out, const char* recon_out) {
  return guarded(
      [&] {
        need(yuv_in, "input path");
        need(params, "params");
        need(records_out, "records path");
        need(recon_out, "recon path");
        const auto cfg = to_search(*params);
        const auto frames = mvglo::read_yuv420(yuv_in, width, height);
        mvglo::require(frames.size() >= 2, ErrorCode::kEmpty, "encoding needs at least 2 frames");
        std::ostringstream config;
        config << "encode width=" << width << " height=" << height << " qp=" << cfg.qp
               << " search=" << to_string(cfg.algorithm) << " range=" << cfg.range
               << " distortion=" << to_string(cfg.distortion);
        mvglo::save_coded(mvglo::encode_sequence(frames, cfg), records_out, recon_out, prov(config.str()));
      },
      records_out);
}

mvglo_status mvglo_run_embed(const char* records_in, const char* recon_in, const char* original_yuv, double rate,
                             uint64_t seed, mvglo_component component, const char* records_out,
                             const char* recon_out, const char* labels_out) {
  return guarded(
      [&] {
        need(records_in, "records path");
        need(recon_in, "recon path");
        need(original_yuv, "original path");
        need(records_out, "output records path");
        need(recon_out, "output recon path");
        const auto cover = mvglo::load_coded(records_in, recon_in);
        const auto original = mvglo::read_yuv420(original_yuv, cover.width, cover.height);
        const mvglo::EmbedConfig ec{rate, seed, to_component(component)};
        const auto stego = mvglo::embed(cover, original, ec);
        std::ostringstream config;
        config << "embed rate=" << mvglo::format_double(rate) << " component=" << to_string(ec.component_mode)
               << " qp=" << cover.config.qp;
        const std::string p = prov(config.str(), std::to_string(seed));
        if (labels_out != nullptr && *labels_out != '\0') {
          write_text(labels_out, [&](std::ostream& out) {
            out << p << "\nframe,index,case\n";
            for (size_t k = 0; k < cover.frames.size(); ++k) {
              const auto& a = cover.frames[k].records;
              const auto& b = stego.frames[k].records;
              for (size_t i = 0; i < a.size(); ++i) {
                out << cover.frames[k].frame_index << ',' << a[i].block_index << ','
                    << static_cast<int>(mvglo::classify_case(a[i], b[i])) << '\n';
              }
            }
          });
        }
        mvglo::save_coded(stego, records_out, recon_out, p);
      },
      records_out);
}

mvglo_status mvglo_run_extract(const mvglo_feature_input* inputs, size_t count, const char* variant, int workers,
                               const char* csv_out) {
  return guarded(
      [&] {
        need(inputs, "inputs");
        need(variant, "variant");
        need(csv_out, "output path");
        mvglo::require(count > 0, ErrorCode::kEmpty, "no inputs to extract");
        const auto v = mvglo::parse_variant(variant);
        std::vector<mvglo::FeatureRow> rows(count);
        mvglo::parallel_for(static_cast<int>(count), workers, [&](int k) {
          const auto& in = inputs[k];
          need(in.records, "records path");
          need(in.recon, "recon path");
          mvglo::require(in.label == 0 || in.label == 1, ErrorCode::kInvalidArgument, "label must be 0 or 1");
          const auto coded = mvglo::load_coded(in.records, in.recon);
          rows[static_cast<size_t>(k)] = {in.label, v, q(in.sequence), mvglo::extract(coded, v).values};
        });
        std::ostringstream config;
        config << "extract variant=" << variant_name(v);
        for (size_t k = 0; k < count; ++k) config << ' ' << inputs[k].label << ':' << q(inputs[k].sequence);
        write_text(csv_out, [&](std::ostream& out) { mvglo::write_feature_csv(out, rows, prov(config.str())); });
      },
      csv_out);
}

mvglo_status mvglo_run_stats(const mvglo_stats_pair* pairs, size_t count, double rate, int workers,
                             const char* out_dir) {
  std::string marker = out_dir ? (fs::path(out_dir) / "stats").string() : "";
  return guarded(
      [&] {
        need(pairs, "pairs");
        need(out_dir, "output directory");
        mvglo::require(count > 0, ErrorCode::kEmpty, "no cover/stego pairs");
        std::vector<mvglo::CodedSequence> cover(count), stego(count);
        mvglo::parallel_for(static_cast<int>(count), workers, [&](int k) {
          const auto& p = pairs[k];
          need(p.cover_records, "cover records path");
          need(p.cover_recon, "cover recon path");
          need(p.stego_records, "stego records path");
          need(p.stego_recon, "stego recon path");
          cover[static_cast<size_t>(k)] = mvglo::load_coded(p.cover_records, p.cover_recon);
          stego[static_cast<size_t>(k)] = mvglo::load_coded(p.stego_records, p.stego_recon);
        });
        const int qp = cover.front().config.qp;
        const std::string r = mvglo::format_double(rate);
        std::ostringstream config;
        config << "stats qp=" << qp << " rate=" << r << " pairs=" << count;
        const std::string p = prov(config.str());
        fs::create_directories(out_dir);
        const fs::path dir(out_dir);

        const auto rates = mvglo::change_rates(cover, stego);
        const mvglo::ChangeRateRow row{rate, rates.mv, rates.pmv, rates.bitrate};
        write_text(dir / mvglo::stats_file_name("change_rates", qp, r),
                   [&](std::ostream& out) { mvglo::write_sweep_csv(out, std::span(&row, 1), p); });
        const auto fc = mvglo::four_case_report(cover, stego, rate);
        write_text(dir / mvglo::stats_file_name("four_case", qp, r),
                   [&](std::ostream& out) { mvglo::write_four_case_csv(out, fc, p); });
        const auto hc = mvglo::optimality_heatmaps(cover, mvglo::HeatmapDirection::kMv);
        write_text(dir / mvglo::stats_file_name("heatmap_cover_mv", qp, r),
                   [&](std::ostream& out) { mvglo::write_heatmap_csv(out, hc, p); });
        const auto hs = mvglo::optimality_heatmaps(stego, mvglo::HeatmapDirection::kPmv);
        write_text(dir / mvglo::stats_file_name("heatmap_stego_pmv", qp, r),
                   [&](std::ostream& out) { mvglo::write_heatmap_csv(out, hs, p); });
      },
      marker.c_str());
}

mvglo_status mvglo_run_train(const char* features_csv, double regularization, const char* model_out) {
  return guarded(
      [&] {
        need(features_csv, "features path");
        need(model_out, "model path");
        std::ifstream in(features_csv);
        mvglo::require(static_cast<bool>(in), ErrorCode::kIo, std::string("cannot open ") + features_csv);
        const auto rows = mvglo::read_feature_csv(in);
        const auto manifest = mvglo::manifest_from_rows(rows);
        std::vector<size_t> all(manifest.entries.size());
        for (size_t k = 0; k < all.size(); ++k) all[k] = k;
        const auto model = mvglo::train(mvglo::gather(manifest, all), {regularization});
        std::ostringstream config;
        config << "train variant=" << variant_name(manifest.variant)
               << " regularization=" << mvglo::format_double(regularization) << " pairs=" << all.size();
        write_text(model_out, [&](std::ostream& out) {
          mvglo::write_model(out, model, manifest.variant, prov(config.str()));
        });
      },
      model_out);
}

mvglo_status mvglo_run_eval(const char* features_csv, const char* model_in, int qp, double rate, int n_splits,
                            uint64_t seed, double regularization, const char* report_out, double* mean_accuracy) {
  return guarded(
      [&] {
        need(features_csv, "features path");
        need(report_out, "report path");
        std::ifstream in(features_csv);
        mvglo::require(static_cast<bool>(in), ErrorCode::kIo, std::string("cannot open ") + features_csv);
        const auto rows = mvglo::read_feature_csv(in);
        auto manifest = mvglo::manifest_from_rows(rows);
        manifest.qp = qp;
        manifest.rate = rate;
        manifest.seed = seed;
        mvglo::ReportRow row{manifest.variant, qp, rate, {}, n_splits};
        std::ostringstream config;
        config << "eval variant=" << variant_name(manifest.variant) << " qp=" << qp
               << " rate=" << mvglo::format_double(rate);
        if (model_in != nullptr && *model_in != '\0') {
          std::ifstream min(model_in);
          mvglo::require(static_cast<bool>(min), ErrorCode::kIo, std::string("cannot open ") + model_in);
          mvglo::Variant mv = manifest.variant;
          const auto model = mvglo::read_model(min, &mv);
          mvglo::require(mv == manifest.variant, ErrorCode::kMisaligned, "model and features differ in variant");
          std::vector<size_t> all(manifest.entries.size());
          for (size_t k = 0; k < all.size(); ++k) all[k] = k;
          const double acc = mvglo::evaluate(model, mvglo::gather(manifest, all));
          row.result = {acc, 0.0, {acc}};
          row.n_splits = 1;
          config << " model=" << model_in;
        } else {
          row.result = mvglo::run_experiment(manifest, n_splits, seed, {regularization});
          config << " n_splits=" << n_splits << " regularization=" << mvglo::format_double(regularization);
        }
        if (mean_accuracy) *mean_accuracy = row.result.mean;
        write_text(report_out, [&](std::ostream& out) {
          mvglo::write_report_csv(out, std::span(&row, 1), prov(config.str(), std::to_string(seed)));
        });
      },
      report_out);
}

void mvglo_pipeline_params_default(mvglo_pipeline_params* params) {
  if (params == nullptr) return;
  static const int kQps[] = {15, 25};
  static const double kRates[] = {0.1, 0.4};
  static const char* const kVariants[] = {"AoSO-18", "NPE-36", "GLO-64"};
  const mvglo::PipelineConfig d;
  *params = {d.sequences, d.width, d.height, d.frames, d.seed, kQps, 2, kRates, 2, kVariants, 3,
             MVGLO_SEARCH_HEX, d.range, d.n_splits, d.regularization, d.stats ? 1 : 0, d.workers};
}

mvglo_status mvglo_run_pipeline(const mvglo_pipeline_params* params, const char* out_dir) {
  return guarded([&] {
    need(params, "params");
    need(out_dir, "output directory");
    mvglo::PipelineConfig cfg;
    cfg.sequences = params->sequences;
    cfg.width = params->width;
    cfg.height = params->height;
    cfg.frames = params->frames;
    cfg.seed = params->seed;
    mvglo::require(params->qp_count > 0 && params->qps, ErrorCode::kInvalidArgument, "qp list is empty");
    mvglo::require(params->rate_count > 0 && params->rates, ErrorCode::kInvalidArgument, "rate list is empty");
    mvglo::require(params->variant_count > 0 && params->variants, ErrorCode::kInvalidArgument,
                   "variant list is empty");
    cfg.qps.assign(params->qps, params->qps + params->qp_count);
    cfg.rates.assign(params->rates, params->rates + params->rate_count);
    cfg.variants.clear();
    for (size_t k = 0; k < params->variant_count; ++k) {
      need(params->variants[k], "variant");
      cfg.variants.push_back(mvglo::parse_variant(params->variants[k]));
    }
    cfg.search = to_algorithm(params->search);
    cfg.range = params->range;
    cfg.n_splits = params->n_splits;
    cfg.regularization = params->regularization;
    cfg.stats = params->stats != 0;
    cfg.workers = params->workers;
    mvglo::run_pipeline(cfg, out_dir);
  });
}

}  // extern "C"
