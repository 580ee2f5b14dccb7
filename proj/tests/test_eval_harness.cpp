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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mvglo/error.hpp"
#include "mvglo/eval_harness.hpp"
#include "mvglo/rng.hpp"

namespace mvglo {
namespace {

// Pairs whose stego rows are shifted by `shift` along every coordinate.
CorpusManifest synthetic(std::size_t pairs, std::size_t dim, double shift, std::uint64_t seed) {
  Rng rng(seed);
  CorpusManifest m;
  m.variant = Variant::kAoso18;
  for (std::size_t p = 0; p < pairs; ++p) {
    SequencePair e{"seq" + std::to_string(p), {}, {}};
    for (std::size_t k = 0; k < dim; ++k) {
      e.cover.push_back(rng.normal());
      e.stego.push_back(rng.normal() + shift);
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

TEST(Split, HalvesAreDisjointAndDeterministic) {
  const auto m = synthetic(70, 2, 0.0, 1);
  const Split a = split(m, 0.5, 42);
  EXPECT_EQ(a.train.size(), 35u);
  EXPECT_EQ(a.test.size(), 35u);
  std::set<std::size_t> all(a.train.begin(), a.train.end());
  for (auto t : a.test) EXPECT_TRUE(all.insert(t).second);
  EXPECT_EQ(all.size(), 70u);
  const Split b = split(m, 0.5, 42);
  EXPECT_EQ(a.train, b.train);
  EXPECT_NE(a.train, split(m, 0.5, 43).train);
  EXPECT_THROW(split(synthetic(1, 2, 0.0, 1), 0.5, 1), Error);
  EXPECT_EQ(split(synthetic(3, 2, 0.0, 1), 0.5, 1).train.size(), 1u);
}

TEST(Gather, KeepsPairsTogether) {
  const auto m = synthetic(4, 3, 1.0, 2);
  const std::vector<std::size_t> idx{2, 0};
  const Dataset d = gather(m, idx);
  ASSERT_EQ(d.x.size(), 4u);
  EXPECT_EQ(d.y, (std::vector<int>{0, 1, 0, 1}));
  EXPECT_EQ(d.x[0], m.entries[2].cover);
  EXPECT_EQ(d.x[1], m.entries[2].stego);
  EXPECT_EQ(d.x[3], m.entries[0].stego);
}

TEST(Manifest, PairsRowsBySequence) {
  std::vector<FeatureRow> rows{{1, Variant::kGlo64, "b", {2.0}}, {0, Variant::kGlo64, "a", {1.0}},
                               {1, Variant::kGlo64, "a", {3.0}}, {0, Variant::kGlo64, "b", {4.0}}};
  const auto m = manifest_from_rows(rows);
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(m.entries[0].id, "b");
  EXPECT_EQ(m.entries[0].cover, std::vector<double>{4.0});
  EXPECT_EQ(m.entries[1].stego, std::vector<double>{3.0});

  auto dup = rows;
  dup.push_back({0, Variant::kGlo64, "a", {9.0}});
  auto missing = rows;
  missing.pop_back();
  auto mixed = rows;
  mixed[0].values.push_back(1.0);
  auto variants = rows;
  variants[1].variant = Variant::kNpe36;
  for (const auto* bad : {&dup, &missing, &variants}) {
    try {
      manifest_from_rows(*bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMisaligned);
    }
  }
  try {
    manifest_from_rows(mixed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMixedDimension);
  }
}

TEST(Logistic, GradientMatchesFiniteDifferences) {
  Rng rng(3);
  std::vector<std::vector<double>> z(30, std::vector<double>(4));
  std::vector<int> y(30);
  for (std::size_t n = 0; n < z.size(); ++n) {
    for (auto& v : z[n]) v = rng.normal();
    y[n] = static_cast<int>(n % 2);
  }
  std::vector<double> w{0.3, -0.7, 0.1, 0.9};
  const double b = -0.2, reg = 0.05;
  const auto g = logistic_gradient(z, y, w, b, reg);
  ASSERT_EQ(g.size(), 5u);
  const double h = 1e-6;
  for (std::size_t k = 0; k < 4; ++k) {
    auto wp = w, wm = w;
    wp[k] += h;
    wm[k] -= h;
    const double fd = (logistic_objective(z, y, wp, b, reg) - logistic_objective(z, y, wm, b, reg)) / (2 * h);
    EXPECT_NEAR(g[k], fd, 1e-7);
  }
  const double fdb = (logistic_objective(z, y, w, b + h, reg) - logistic_objective(z, y, w, b - h, reg)) / (2 * h);
  EXPECT_NEAR(g[4], fdb, 1e-7);
}

TEST(Logistic, SeparableDataIsFitExactly) {
  const auto m = synthetic(40, 3, 8.0, 4);
  std::vector<std::size_t> all(40);
  for (std::size_t k = 0; k < 40; ++k) all[k] = k;
  const Dataset d = gather(m, all);
  const LinearModel model = train(d);
  EXPECT_DOUBLE_EQ(evaluate(model, d), 1.0);
  EXPECT_LE(model.gradient_norm, 1e-6);
  for (double w : model.weights) EXPECT_TRUE(std::isfinite(w));
}

TEST(Logistic, ContradictoryLabelsStayFinite) {
  Dataset d;
  for (int k = 0; k < 10; ++k) {
    d.x.push_back({1.0, 2.0});
    d.y.push_back(k % 2);
  }
  const LinearModel model = train(d, {0.0, 1e-8, 100});
  for (double w : model.weights) EXPECT_TRUE(std::isfinite(w));
  EXPECT_TRUE(std::isfinite(model.bias));
  EXPECT_NEAR(model.bias, 0.0, 1e-6);
}

TEST(Logistic, RejectsBadTrainingSets) {
  Dataset single{{{1.0}, {2.0}}, {1, 1}};
  try {
    train(single);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClass);
  }
  EXPECT_THROW(train(Dataset{}), Error);
  Dataset nan{{{1.0}, {std::nan("")}}, {0, 1}};
  try {
    train(nan);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
  }
}

TEST(Standardizer, FitUsesTrainingRowsOnly) {
  const auto m = synthetic(20, 3, 2.0, 5);
  const Split s = split(m, 0.5, 7);
  const Dataset tr = gather(m, s.train);
  const LinearModel model = train(tr);
  for (std::size_t k = 0; k < 3; ++k) {
    double mean = 0.0;
    for (const auto& row : tr.x) mean += row[k];
    mean /= static_cast<double>(tr.x.size());
    EXPECT_NEAR(model.standardizer.mean[k], mean, 1e-12);
  }
  const auto st = Standardizer::fit({{1.0, 5.0}, {3.0, 5.0}});
  EXPECT_EQ(st.mean, (std::vector<double>{2.0, 5.0}));
  EXPECT_EQ(st.scale, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(st.apply(std::vector<double>{3.0, 7.0}), (std::vector<double>{1.0, 2.0}));
}

TEST(BalancedAccuracy, ReferenceValues) {
  const std::vector<int> y{0, 0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(balanced_accuracy(std::vector<double>{-1, -1, -1, 1, 1}, y), 1.0);
  EXPECT_DOUBLE_EQ(balanced_accuracy(std::vector<double>{1, 1, 1, 1, 1}, y), 0.5);
  EXPECT_DOUBLE_EQ(balanced_accuracy(std::vector<double>{0, 0, 0, 0, 0}, y), 0.5);
  // One false positive out of three covers, one miss out of two stegos.
  EXPECT_DOUBLE_EQ(balanced_accuracy(std::vector<double>{1, -1, -1, 1, -1}, y), 0.5 * (2.0 / 3.0 + 0.5));
  // Swapping labels and negating scores leaves the value unchanged.
  const std::vector<double> s{0.3, -2.0, 1.5, 0.7, -0.1};
  const std::vector<int> swapped{1, 1, 1, 0, 0};
  std::vector<double> neg(s.size());
  std::transform(s.begin(), s.end(), neg.begin(), [](double v) { return -v; });
  EXPECT_DOUBLE_EQ(balanced_accuracy(s, y), balanced_accuracy(neg, swapped));
  EXPECT_THROW(balanced_accuracy(std::vector<double>{1.0}, std::vector<int>{1}), Error);
}

TEST(Experiment, RandomFeaturesScoreChance) {
  const auto m = synthetic(100, 5, 0.0, 6);
  const ExperimentResult r = run_experiment(m, 20, 11);
  ASSERT_EQ(r.accuracies.size(), 20u);
  EXPECT_NEAR(r.mean, 0.5, 0.1);
  EXPECT_GT(r.stddev, 0.0);
}

TEST(Experiment, SingleSplitEqualsDirectEvaluation) {
  const auto m = synthetic(30, 4, 0.7, 8);
  const ExperimentResult r = run_experiment(m, 1, 99);
  const Split s = split(m, 0.5, derive_seed(99, 0));
  const double direct = evaluate(train(gather(m, s.train)), gather(m, s.test));
  EXPECT_DOUBLE_EQ(r.mean, direct);
  EXPECT_EQ(r.stddev, 0.0);
  EXPECT_GT(r.mean, 0.6);
  EXPECT_EQ(run_experiment(m, 5, 1).accuracies, run_experiment(m, 5, 1).accuracies);
}

TEST(Experiment, CrossCorpus) {
  const auto a = synthetic(30, 3, 3.0, 9);
  const auto b = synthetic(30, 3, 3.0, 10);
  EXPECT_GT(cross_corpus_accuracy(a, b), 0.9);
}

TEST(ModelFile, RoundTrips) {
  const auto m = synthetic(20, 3, 1.0, 12);
  std::vector<std::size_t> all(20);
  for (std::size_t k = 0; k < 20; ++k) all[k] = k;
  const LinearModel model = train(gather(m, all));
  std::stringstream io;
  write_model(io, model, Variant::kNpe36, "# prov");
  Variant v = Variant::kGlo64;
  const LinearModel back = read_model(io, &v);
  EXPECT_EQ(v, Variant::kNpe36);
  EXPECT_EQ(back.weights, model.weights);
  EXPECT_EQ(back.bias, model.bias);
  EXPECT_EQ(back.standardizer.scale, model.standardizer.scale);
  std::istringstream bad("mvglo-model 1\ndimension 2\nweights 1\n");
  EXPECT_THROW(read_model(bad), Error);
}

TEST(Report, Csv) {
  ReportRow r{Variant::kGlo64, 15, 0.4, {0.75, 0.05, {}}, 20};
  std::ostringstream out;
  write_report_csv(out, std::span(&r, 1), "# prov");
  EXPECT_EQ(out.str(), "# prov\nvariant,qp,rate,mean_acc,std_acc,n_splits\nGLO-64,15,0.4,0.75,0.05,20\n");
}

}  // namespace
}  // namespace mvglo
