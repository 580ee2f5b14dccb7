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

#ifndef MVGLO_MVGLO_H_
#define MVGLO_MVGLO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MVGLO_BUILDING_LIBRARY)
#define MVGLO_API __declspec(dllexport)
#else
#define MVGLO_API __declspec(dllimport)
#endif
#else
#define MVGLO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mvglo_status {
  MVGLO_OK = 0,
  MVGLO_E_INVALID_ARGUMENT = 1,
  MVGLO_E_IO = 2,
  MVGLO_E_SIZE_MISMATCH = 3,
  MVGLO_E_DIMENSION = 4,
  MVGLO_E_MIXED_DIMENSION = 5,
  MVGLO_E_FORMAT = 6,
  MVGLO_E_EMPTY = 7,
  MVGLO_E_MISALIGNED = 8,
  MVGLO_E_ZERO_CENTER_COST = 9,
  MVGLO_E_SINGLE_CLASS = 10,
  MVGLO_E_NON_FINITE = 11,
  MVGLO_E_INTERNAL = 99
} mvglo_status;

typedef enum mvglo_search {
  MVGLO_SEARCH_ESA = 0,
  MVGLO_SEARCH_DIA = 1,
  MVGLO_SEARCH_HEX = 2
} mvglo_search;

typedef enum mvglo_distortion { MVGLO_DIST_SAD = 0, MVGLO_DIST_SATD = 1 } mvglo_distortion;

typedef enum mvglo_component {
  MVGLO_COMPONENT_EITHER = 0,
  MVGLO_COMPONENT_HORIZONTAL = 1,
  MVGLO_COMPONENT_VERTICAL = 2
} mvglo_component;

typedef struct mvglo_sequence mvglo_sequence;
typedef struct mvglo_coded mvglo_coded;

MVGLO_API const char* mvglo_version(void);
MVGLO_API const char* mvglo_status_name(mvglo_status status);
/* Message of the last failure on the calling thread; "" if none. */
MVGLO_API const char* mvglo_last_error(void);

/* Formula helpers. */
MVGLO_API double mvglo_lambda(int qp);
MVGLO_API int mvglo_mvd_bits(int component);
MVGLO_API size_t mvglo_variant_dimension(const char* variant);

typedef struct mvglo_synth_params {
  int width;
  int height;
  int frames;
  uint64_t seed;
  int motion_amplitude;
  double texture_scale;
  double noise_sigma;
  double flat_probability;
} mvglo_synth_params;

MVGLO_API void mvglo_synth_params_default(mvglo_synth_params* params);

MVGLO_API mvglo_status mvglo_sequence_synth(const mvglo_synth_params* params, mvglo_sequence** out);
MVGLO_API mvglo_status mvglo_sequence_read(const char* path, int width, int height, mvglo_sequence** out);
MVGLO_API mvglo_status mvglo_sequence_write(const mvglo_sequence* seq, const char* path);
MVGLO_API int mvglo_sequence_width(const mvglo_sequence* seq);
MVGLO_API int mvglo_sequence_height(const mvglo_sequence* seq);
MVGLO_API int mvglo_sequence_frames(const mvglo_sequence* seq);
/* Copies luma of one frame into buf (width*height bytes). */
MVGLO_API mvglo_status mvglo_sequence_luma(const mvglo_sequence* seq, int frame, uint8_t* buf, size_t size);
MVGLO_API void mvglo_sequence_free(mvglo_sequence* seq);

typedef struct mvglo_search_params {
  mvglo_search algorithm;
  int range;
  int qp;
  mvglo_distortion distortion;
} mvglo_search_params;

MVGLO_API void mvglo_search_params_default(mvglo_search_params* params);

typedef struct mvglo_block_record {
  int frame;
  int index;
  int mv_h, mv_v;
  int pmv_h, pmv_v;
  int mvd_h, mvd_v;
  int sad;
  int satd;
  double rd_cost;
  int mv_changed;
  int pmv_changed;
} mvglo_block_record;

MVGLO_API mvglo_status mvglo_encode(const mvglo_sequence* seq, const mvglo_search_params* params,
                                    mvglo_coded** out);
MVGLO_API mvglo_status mvglo_embed(const mvglo_coded* cover, const mvglo_sequence* original, double rate,
                                   uint64_t seed, mvglo_component component, mvglo_coded** out);
MVGLO_API mvglo_status mvglo_coded_load(const char* records_path, const char* recon_path, mvglo_coded** out);
MVGLO_API mvglo_status mvglo_coded_save(const mvglo_coded* coded, const char* records_path,
                                        const char* recon_path);
/* Number of inter frames (records start at frame 1). */
MVGLO_API int mvglo_coded_frames(const mvglo_coded* coded);
MVGLO_API int mvglo_coded_blocks_per_frame(const mvglo_coded* coded);
MVGLO_API mvglo_status mvglo_coded_record(const mvglo_coded* coded, int inter_frame, int block,
                                          mvglo_block_record* out);
MVGLO_API void mvglo_coded_free(mvglo_coded* coded);

MVGLO_API mvglo_status mvglo_change_rates(const mvglo_coded* cover, const mvglo_coded* stego, double* mv_rate,
                                          double* pmv_rate, double* bitrate_rate);

/* Writes up to `capacity` values; *dimension receives the variant dimension. */
MVGLO_API mvglo_status mvglo_extract(const mvglo_coded* coded, const char* variant, double* values,
                                     size_t capacity, size_t* dimension);

/* File-level operations. Every text output starts with a provenance comment. */

MVGLO_API mvglo_status mvglo_run_synth(const mvglo_synth_params* params, const char* yuv_out);
MVGLO_API mvglo_status mvglo_run_encode(const char* yuv_in, int width, int height,
                                        const mvglo_search_params* params, const char* records_out,
                                        const char* recon_out);
/* labels_out receives one row per block: frame,index,case. */
MVGLO_API mvglo_status mvglo_run_embed(const char* records_in, const char* recon_in, const char* original_yuv,
                                       double rate, uint64_t seed, mvglo_component component,
                                       const char* records_out, const char* recon_out, const char* labels_out);

typedef struct mvglo_feature_input {
  int label; /* 0 cover, 1 stego */
  const char* sequence;
  const char* records;
  const char* recon;
} mvglo_feature_input;

MVGLO_API mvglo_status mvglo_run_extract(const mvglo_feature_input* inputs, size_t count, const char* variant,
                                         int workers, const char* csv_out);

typedef struct mvglo_stats_pair {
  const char* cover_records;
  const char* cover_recon;
  const char* stego_records;
  const char* stego_recon;
} mvglo_stats_pair;

/* Writes stats_change_rates, stats_four_case and both heatmap CSVs into out_dir. */
MVGLO_API mvglo_status mvglo_run_stats(const mvglo_stats_pair* pairs, size_t count, double rate, int workers,
                                       const char* out_dir);

MVGLO_API mvglo_status mvglo_run_train(const char* features_csv, double regularization, const char* model_out);
/* With model_in set, scores the whole CSV with that model (one split);
   otherwise runs n_splits pair-preserving 50/50 splits. */
MVGLO_API mvglo_status mvglo_run_eval(const char* features_csv, const char* model_in, int qp, double rate,
                                      int n_splits, uint64_t seed, double regularization, const char* report_out,
                                      double* mean_accuracy);

typedef struct mvglo_pipeline_params {
  int sequences;
  int width;
  int height;
  int frames;
  uint64_t seed;
  const int* qps;
  size_t qp_count;
  const double* rates;
  size_t rate_count;
  const char* const* variants;
  size_t variant_count;
  mvglo_search search;
  int range;
  int n_splits;
  double regularization;
  int stats;
  int workers; /* 0: hardware concurrency */
} mvglo_pipeline_params;

/* Defaults; list pointers refer to static storage. */
MVGLO_API void mvglo_pipeline_params_default(mvglo_pipeline_params* params);
MVGLO_API mvglo_status mvglo_run_pipeline(const mvglo_pipeline_params* params, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif  // MVGLO_MVGLO_H_
