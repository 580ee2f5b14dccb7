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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvglo/glo_features.hpp"

namespace mvglo {

struct SequencePair {
  std::string id;
  std::vector<double> cover;
  std::vector<double> stego;
};

struct CorpusManifest {
  Variant variant = Variant::kGlo64;
  int qp = 0;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::vector<SequencePair> entries;

  std::size_t dimension() const { return entries.empty() ? 0 : entries.front().cover.size(); }
};

/// Pairs cover (label 0) and stego (label 1) rows by sequence id, in order of
/// first appearance. Every id needs exactly one row of each label.
CorpusManifest manifest_from_rows(std::span<const FeatureRow> rows);

struct Split {
  std::vector<std::size_t> train;  // pair indices
  std::vector<std::size_t> test;
};

/// Pair-preserving random split; floor(fraction * n) pairs go to training.
Split split(const CorpusManifest& manifest, double fraction, std::uint64_t seed);

struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<int> y;  // 0 cover, 1 stego
};

Dataset gather(const CorpusManifest& manifest, std::span<const std::size_t> pairs);

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const std::vector<std::vector<double>>& x);
  std::vector<double> apply(std::span<const double> row) const;
};

struct TrainOptions {
  double regularization = 1e-2;
  double tolerance = 1e-6;
  int max_iterations = 200;
};

struct LinearModel {
  std::vector<double> weights;  // in standardized space
  double bias = 0.0;
  double regularization = 0.0;
  Standardizer standardizer;
  int iterations = 0;
  double gradient_norm = 0.0;

  double score(std::span<const double> row) const;
};

/// Mean logistic loss plus (reg/2)|w|^2 over standardized rows; labels in
/// {0, 1} map to -1/+1. The bias is not penalised.
double logistic_objective(const std::vector<std::vector<double>>& z, std::span<const int> y,
                          std::span<const double> w, double bias, double reg);

/// Gradient of logistic_objective: d/dw followed by d/dbias.
std::vector<double> logistic_gradient(const std::vector<std::vector<double>>& z, std::span<const int> y,
                                      std::span<const double> w, double bias, double reg);

/// Standardization fit on `train` only, then damped Newton iterations until
/// the gradient norm drops to options.tolerance or the iteration cap.
LinearModel train(const Dataset& train, const TrainOptions& options = {});

/// (TPR + TNR) / 2 with stego predicted when score > 0.
double balanced_accuracy(std::span<const double> scores, std::span<const int> labels);
double evaluate(const LinearModel& model, const Dataset& test);

struct ExperimentResult {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single split
  std::vector<double> accuracies;
};

/// Split k uses derive_seed(seed, k).
ExperimentResult run_experiment(const CorpusManifest& manifest, int n_splits, std::uint64_t seed,
                                const TrainOptions& options = {});

/// Train on all of `train_on`, test on all of `test_on`.
double cross_corpus_accuracy(const CorpusManifest& train_on, const CorpusManifest& test_on,
                             const TrainOptions& options = {});

void write_model(std::ostream& out, const LinearModel& model, Variant variant, std::string_view provenance);
LinearModel read_model(std::istream& in, Variant* variant = nullptr);

struct ReportRow {
  Variant variant = Variant::kGlo64;
  int qp = 0;
  double rate = 0.0;
  ExperimentResult result;
  int n_splits = 0;
};

/// `variant,qp,rate,mean_acc,std_acc,n_splits`
void write_report_csv(std::ostream& out, std::span<const ReportRow> rows, std::string_view provenance);

}  // namespace mvglo
