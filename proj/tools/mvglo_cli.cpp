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

#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvglo/mvglo.h"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_fields(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(text.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() != expected) {
    throw UsageError(std::string(flag) + " expects " + std::to_string(expected) + " comma-separated fields");
  }
  return out;
}

int check(mvglo_status status) {
  if (status == MVGLO_OK) return 0;
  const bool usage = status == MVGLO_E_INVALID_ARGUMENT || status == MVGLO_E_EMPTY || status == MVGLO_E_FORMAT ||
                     status == MVGLO_E_DIMENSION;
  std::fprintf(stderr, "mvglo: %s: %s\n", usage ? "usage" : mvglo_status_name(status), mvglo_last_error());
  return usage ? 2 : 1;
}

const std::map<std::string, mvglo_search> kSearch{
    {"esa", MVGLO_SEARCH_ESA}, {"dia", MVGLO_SEARCH_DIA}, {"hex", MVGLO_SEARCH_HEX}};
const std::map<std::string, mvglo_distortion> kDistortion{{"sad", MVGLO_DIST_SAD}, {"satd", MVGLO_DIST_SATD}};
const std::map<std::string, mvglo_component> kComponent{{"either", MVGLO_COMPONENT_EITHER},
                                                        {"horizontal", MVGLO_COMPONENT_HORIZONTAL},
                                                        {"vertical", MVGLO_COMPONENT_VERTICAL}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motion-vector steganalysis lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mvglo_version()));
  int workers = 0;
  std::function<int()> run;

  // synth
  mvglo_synth_params sp;
  mvglo_synth_params_default(&sp);
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic YUV 4:2:0 sequence");
  synth->add_option("--out", synth_out, "Output .yuv path")->required();
  synth->add_option("--width", sp.width)->capture_default_str();
  synth->add_option("--height", sp.height)->capture_default_str();
  synth->add_option("--frames", sp.frames)->capture_default_str();
  synth->add_option("--seed", sp.seed)->capture_default_str();
  synth->add_option("--amplitude", sp.motion_amplitude, "Max object speed, pixels/frame")->capture_default_str();
  synth->add_option("--texture", sp.texture_scale)->capture_default_str();
  synth->add_option("--noise", sp.noise_sigma)->capture_default_str();
  synth->add_option("--flat", sp.flat_probability, "Probability of an untextured surface")->capture_default_str();
  synth->add_option("--workers", workers);
  synth->callback([&] { run = [&] { return check(mvglo_run_synth(&sp, synth_out.c_str())); }; });

  // encode
  mvglo_search_params search;
  mvglo_search_params_default(&search);
  std::string enc_in, enc_records, enc_recon;
  int width = 176, height = 144;
  auto* encode = app.add_subcommand("encode", "Motion-search a YUV sequence into block records");
  encode->add_option("--in", enc_in, "Input .yuv")->required()->check(CLI::ExistingFile);
  encode->add_option("--width", width)->capture_default_str();
  encode->add_option("--height", height)->capture_default_str();
  encode->add_option("--qp", search.qp)->capture_default_str();
  encode->add_option("--search", search.algorithm)->transform(CLI::CheckedTransformer(kSearch))->capture_default_str();
  encode->add_option("--range", search.range)->capture_default_str();
  encode->add_option("--distortion", search.distortion)->transform(CLI::CheckedTransformer(kDistortion));
  encode->add_option("--records", enc_records, "Output records sidecar")->required();
  encode->add_option("--recon", enc_recon, "Output reconstruction .yuv")->required();
  encode->add_option("--workers", workers);
  encode->callback([&] {
    run = [&] {
      return check(mvglo_run_encode(enc_in.c_str(), width, height, &search, enc_records.c_str(), enc_recon.c_str()));
    };
  });

  // embed
  std::string emb_records, emb_recon, emb_original, emb_out_records, emb_out_recon, emb_labels;
  double rate = 0.1;
  std::uint64_t seed = 1;
  mvglo_component component = MVGLO_COMPONENT_EITHER;
  auto* emb = app.add_subcommand("embed", "Apply +-1 MV changes and re-derive the stream");
  emb->add_option("--records", emb_records)->required()->check(CLI::ExistingFile);
  emb->add_option("--recon", emb_recon)->required()->check(CLI::ExistingFile);
  emb->add_option("--original", emb_original, "Source .yuv the cover was encoded from")
      ->required()
      ->check(CLI::ExistingFile);
  emb->add_option("--rate", rate, "Fraction of MVs changed")->required();
  emb->add_option("--seed", seed)->capture_default_str();
  emb->add_option("--component", component)->transform(CLI::CheckedTransformer(kComponent));
  emb->add_option("--out-records", emb_out_records)->required();
  emb->add_option("--out-recon", emb_out_recon)->required();
  emb->add_option("--labels", emb_labels, "Per-block case labels CSV");
  emb->add_option("--workers", workers);
  emb->callback([&] {
    run = [&] {
      return check(mvglo_run_embed(emb_records.c_str(), emb_recon.c_str(), emb_original.c_str(), rate, seed,
                                   component, emb_out_records.c_str(), emb_out_recon.c_str(), emb_labels.c_str()));
    };
  });

  // extract
  std::vector<std::string> ext_inputs;
  std::string variant = "GLO-64", ext_out;
  auto* ext = app.add_subcommand("extract", "Compute feature vectors from block records");
  ext->add_option("--input", ext_inputs, "label,sequence,records,recon (repeatable)")->required();
  ext->add_option("--variant", variant)->capture_default_str();
  ext->add_option("--out", ext_out)->required();
  ext->add_option("--workers", workers);
  ext->callback([&] {
    run = [&] {
      std::vector<std::vector<std::string>> fields;
      std::vector<mvglo_feature_input> inputs;
      for (const auto& s : ext_inputs) fields.push_back(split_fields(s, 4, "--input"));
      for (const auto& f : fields) {
        if (f[0] != "0" && f[0] != "1") throw UsageError("--input label must be 0 or 1");
        inputs.push_back({f[0] == "1" ? 1 : 0, f[1].c_str(), f[2].c_str(), f[3].c_str()});
      }
      return check(mvglo_run_extract(inputs.data(), inputs.size(), variant.c_str(), workers, ext_out.c_str()));
    };
  });

  // stats
  std::vector<std::string> stat_pairs;
  std::string out_dir = "out";
  auto* stats = app.add_subcommand("stats", "Change rates, four-case table and heatmaps");
  stats->add_option("--pair", stat_pairs, "cover_records,cover_recon,stego_records,stego_recon (repeatable)")
      ->required();
  stats->add_option("--rate", rate, "Change rate used for the stego side")->required();
  stats->add_option("--out-dir", out_dir)->capture_default_str();
  stats->add_option("--workers", workers);
  stats->callback([&] {
    run = [&] {
      std::vector<std::vector<std::string>> fields;
      std::vector<mvglo_stats_pair> pairs;
      for (const auto& s : stat_pairs) fields.push_back(split_fields(s, 4, "--pair"));
      for (const auto& f : fields) pairs.push_back({f[0].c_str(), f[1].c_str(), f[2].c_str(), f[3].c_str()});
      return check(mvglo_run_stats(pairs.data(), pairs.size(), rate, workers, out_dir.c_str()));
    };
  });

  // train
  std::string features, model;
  double regularization = 1e-2;
  auto* train = app.add_subcommand("train", "Fit the logistic detector on a feature CSV");
  train->add_option("--features", features)->required()->check(CLI::ExistingFile);
  train->add_option("--reg", regularization)->capture_default_str();
  train->add_option("--model", model, "Output model file")->required();
  train->add_option("--workers", workers);
  train->callback([&] { run = [&] { return check(mvglo_run_train(features.c_str(), regularization, model.c_str())); }; });

  // eval
  std::string report;
  int qp = 15, splits = 20;
  auto* eval = app.add_subcommand("eval", "Balanced accuracy over random pair-preserving splits");
  eval->add_option("--features", features)->required()->check(CLI::ExistingFile);
  eval->add_option("--model", model, "Score with a trained model instead of splitting")->check(CLI::ExistingFile);
  eval->add_option("--qp", qp, "Recorded in the report")->capture_default_str();
  eval->add_option("--rate", rate, "Recorded in the report")->capture_default_str();
  eval->add_option("--splits", splits)->capture_default_str();
  eval->add_option("--seed", seed)->capture_default_str();
  eval->add_option("--reg", regularization)->capture_default_str();
  eval->add_option("--out", report)->required();
  eval->add_option("--workers", workers);
  eval->callback([&] {
    run = [&] {
      double mean = 0.0;
      const int rc = check(mvglo_run_eval(features.c_str(), model.c_str(), qp, rate, splits, seed, regularization,
                                          report.c_str(), &mean));
      if (rc == 0) std::printf("mean_acc %.6f\n", mean);
      return rc;
    };
  });

  // pipeline
  mvglo_pipeline_params pp;
  mvglo_pipeline_params_default(&pp);
  std::vector<int> qps(pp.qps, pp.qps + pp.qp_count);
  std::vector<double> rates(pp.rates, pp.rates + pp.rate_count);
  std::vector<std::string> variants(pp.variants, pp.variants + pp.variant_count);
  bool no_stats = false;
  auto* pipe = app.add_subcommand("pipeline", "Synthesize, encode, embed, extract and evaluate a corpus");
  pipe->add_option("--out-dir", out_dir)->capture_default_str();
  pipe->add_option("--sequences", pp.sequences)->capture_default_str();
  pipe->add_option("--width", pp.width)->capture_default_str();
  pipe->add_option("--height", pp.height)->capture_default_str();
  pipe->add_option("--frames", pp.frames)->capture_default_str();
  pipe->add_option("--seed", pp.seed)->capture_default_str();
  pipe->add_option("--qp", qps)->delimiter(',')->capture_default_str();
  pipe->add_option("--rate", rates)->delimiter(',')->capture_default_str();
  pipe->add_option("--variant", variants)->delimiter(',')->capture_default_str();
  pipe->add_option("--search", pp.search)->transform(CLI::CheckedTransformer(kSearch));
  pipe->add_option("--range", pp.range)->capture_default_str();
  pipe->add_option("--splits", pp.n_splits)->capture_default_str();
  pipe->add_option("--reg", pp.regularization)->capture_default_str();
  pipe->add_flag("--no-stats", no_stats, "Skip the stats CSVs");
  pipe->add_option("--workers", pp.workers, "0 uses all hardware threads")->capture_default_str();
  pipe->callback([&] {
    run = [&] {
      std::vector<const char*> names;
      for (const auto& v : variants) names.push_back(v.c_str());
      pp.qps = qps.data();
      pp.qp_count = qps.size();
      pp.rates = rates.data();
      pp.rate_count = rates.size();
      pp.variants = names.data();
      pp.variant_count = names.size();
      pp.stats = no_stats ? 0 : 1;
      return check(mvglo_run_pipeline(&pp, out_dir.c_str()));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "mvglo: usage: %s\n", e.what());
    return 2;
  }
  try {
    return run ? run() : 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "mvglo: usage: %s\n", e.what());
    return 2;
  }
}
