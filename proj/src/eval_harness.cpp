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

#include "mvglo/eval_harness.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mvglo/error.hpp"
#include "mvglo/provenance.hpp"
#include "mvglo/rng.hpp"

namespace mvglo {

CorpusManifest manifest_from_rows(std::span<const FeatureRow> rows) {
  require(!rows.empty(), ErrorCode::kEmpty, "no feature rows");
  CorpusManifest m;
  m.variant = rows.front().variant;
  std::map<std::string, std::size_t> index;
  std::vector<std::pair<bool, bool>> seen;
  for (const FeatureRow& r : rows) {
    require(r.variant == m.variant, ErrorCode::kMisaligned, "feature rows mix variants");
    require(r.values.size() == rows.front().values.size(), ErrorCode::kMixedDimension,
            "feature rows differ in dimension");
    auto [it, inserted] = index.emplace(r.sequence, m.entries.size());
    if (inserted) {
      m.entries.push_back({r.sequence, {}, {}});
      seen.emplace_back(false, false);
    }
    auto& flags = seen[it->second];
    bool& slot = r.label == 1 ? flags.second : flags.first;
    require(!slot, ErrorCode::kMisaligned, "duplicate row for sequence " + r.sequence);
    slot = true;
    (r.label == 1 ? m.entries[it->second].stego : m.entries[it->second].cover) = r.values;
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    require(seen[k].first && seen[k].second, ErrorCode::kMisaligned,
            "sequence " + m.entries[k].id + " lacks a cover or stego row");
  }
  return m;
}

Split split(const CorpusManifest& manifest, double fraction, std::uint64_t seed) {
  const std::size_t n = manifest.entries.size();
  require(n >= 2, ErrorCode::kInvalidArgument, "need at least 2 cover/stego pairs to split");
  require(fraction > 0.0 && fraction < 1.0, ErrorCode::kInvalidArgument, "split fraction must be in (0, 1)");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  Split s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return s;
}

Dataset gather(const CorpusManifest& manifest, std::span<const std::size_t> pairs) {
  Dataset d;
  for (const std::size_t p : pairs) {
    const SequencePair& e = manifest.entries.at(p);
    d.x.push_back(e.cover);
    d.y.push_back(0);
    d.x.push_back(e.stego);
    d.y.push_back(1);
  }
  return d;
}

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& x) {
  require(!x.empty(), ErrorCode::kEmpty, "cannot standardize an empty dataset");
  const std::size_t d = x.front().size();
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 0.0);
  for (const auto& row : x) {
    for (std::size_t k = 0; k < d; ++k) s.mean[k] += row[k];
  }
  for (auto& m : s.mean) m /= static_cast<double>(x.size());
  for (const auto& row : x) {
    for (std::size_t k = 0; k < d; ++k) s.scale[k] += (row[k] - s.mean[k]) * (row[k] - s.mean[k]);
  }
  for (auto& v : s.scale) {
    v = std::sqrt(v / static_cast<double>(x.size()));
    if (v < 1e-12) v = 1.0;  // constant feature
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> row) const {
  require(row.size() == mean.size(), ErrorCode::kMixedDimension, "feature dimension mismatch");
  std::vector<double> z(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) z[k] = (row[k] - mean[k]) / scale[k];
  return z;
}

double LinearModel::score(std::span<const double> row) const {
  const auto z = standardizer.apply(row);
  double s = bias;
  for (std::size_t k = 0; k < z.size(); ++k) s += weights[k] * z[k];
  return s;
}

namespace {

double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }
double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}
double sign_of(int label) { return label == 1 ? 1.0 : -1.0; }

double margin(const std::vector<double>& z, std::span<const double> w, double bias) {
  double s = bias;
  for (std::size_t k = 0; k < z.size(); ++k) s += w[k] * z[k];
  return s;
}

}  // namespace

double logistic_objective(const std::vector<std::vector<double>>& z, std::span<const int> y,
                          std::span<const double> w, double bias, double reg) {
  double loss = 0.0;
  for (std::size_t n = 0; n < z.size(); ++n) loss += softplus(-sign_of(y[n]) * margin(z[n], w, bias));
  double norm2 = 0.0;
  for (const double v : w) norm2 += v * v;
  return loss / static_cast<double>(z.size()) + 0.5 * reg * norm2;
}

std::vector<double> logistic_gradient(const std::vector<std::vector<double>>& z, std::span<const int> y,
                                      std::span<const double> w, double bias, double reg) {
  const std::size_t d = w.size();
  std::vector<double> g(d + 1, 0.0);
  for (std::size_t n = 0; n < z.size(); ++n) {
    const double t = sign_of(y[n]);
    const double coef = -t * sigmoid(-t * margin(z[n], w, bias));
    for (std::size_t k = 0; k < d; ++k) g[k] += coef * z[n][k];
    g[d] += coef;
  }
  for (std::size_t k = 0; k <= d; ++k) g[k] /= static_cast<double>(z.size());
  for (std::size_t k = 0; k < d; ++k) g[k] += reg * w[k];
  return g;
}

LinearModel train(const Dataset& data, const TrainOptions& options) {
  require(!data.x.empty() && data.x.size() == data.y.size(), ErrorCode::kEmpty, "empty training set");
  require(options.regularization >= 0.0, ErrorCode::kInvalidArgument, "regularization must be nonnegative");
  bool has0 = false, has1 = false;
  for (const int label : data.y) (label == 1 ? has1 : has0) = true;
  require(has0 && has1, ErrorCode::kSingleClass, "training set holds a single class");
  for (const auto& row : data.x) {
    for (const double v : row) require(std::isfinite(v), ErrorCode::kNonFinite, "non-finite feature value");
  }

  LinearModel model;
  model.regularization = options.regularization;
  model.standardizer = Standardizer::fit(data.x);
  std::vector<std::vector<double>> z;
  z.reserve(data.x.size());
  for (const auto& row : data.x) z.push_back(model.standardizer.apply(row));

  const std::size_t d = z.front().size();
  const double n = static_cast<double>(z.size());
  const double reg = options.regularization;
  Eigen::MatrixXd design(z.size(), d + 1);
  for (std::size_t r = 0; r < z.size(); ++r) {
    for (std::size_t k = 0; k < d; ++k) design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = z[r][k];
    design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d)) = 1.0;
  }

  std::vector<double> theta(d + 1, 0.0);
  auto objective = [&](const std::vector<double>& t) {
    return logistic_objective(z, data.y, std::span(t).first(d), t[d], reg);
  };
  double f = objective(theta);
  for (model.iterations = 0; model.iterations < options.max_iterations; ++model.iterations) {
    const auto g = logistic_gradient(z, data.y, std::span(theta).first(d), theta[d], reg);
    double gnorm = 0.0;
    for (const double v : g) gnorm += v * v;
    model.gradient_norm = std::sqrt(gnorm);
    if (model.gradient_norm <= options.tolerance) break;

    Eigen::VectorXd curvature(z.size());
    for (std::size_t r = 0; r < z.size(); ++r) {
      const double p = sigmoid(margin(z[r], std::span(theta).first(d), theta[d]));
      curvature(static_cast<Eigen::Index>(r)) = p * (1.0 - p) / n;
    }
    Eigen::MatrixXd hessian = design.transpose() * curvature.asDiagonal() * design;
    for (std::size_t k = 0; k < d; ++k) hessian(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) += reg;
    hessian(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) += 1e-12;
    const Eigen::VectorXd grad = Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(d + 1));
    const Eigen::VectorXd step = hessian.ldlt().solve(grad);

    // Backtracking on the Armijo condition.
    double t = 1.0;
    const double slope = grad.dot(step);
    std::vector<double> next(d + 1);
    for (int tries = 0; tries < 50; ++tries, t *= 0.5) {
      for (std::size_t k = 0; k <= d; ++k) next[k] = theta[k] - t * step(static_cast<Eigen::Index>(k));
      if (objective(next) <= f - 1e-4 * t * slope) break;
    }
    const double f_next = objective(next);
    if (!(f_next <= f)) break;
    theta = next;
    f = f_next;
  }
  model.weights.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(d));
  model.bias = theta[d];
  return model;
}

double balanced_accuracy(std::span<const double> scores, std::span<const int> labels) {
  require(scores.size() == labels.size(), ErrorCode::kMisaligned, "scores and labels differ in length");
  std::size_t pos = 0, neg = 0, tp = 0, tn = 0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (labels[k] == 1) {
      ++pos;
      tp += scores[k] > 0.0;
    } else {
      ++neg;
      tn += scores[k] <= 0.0;
    }
  }
  require(pos > 0 && neg > 0, ErrorCode::kSingleClass, "test set holds a single class");
  return 0.5 * (static_cast<double>(tp) / static_cast<double>(pos) +
                static_cast<double>(tn) / static_cast<double>(neg));
}

double evaluate(const LinearModel& model, const Dataset& test) {
  require(!test.x.empty(), ErrorCode::kEmpty, "empty test set");
  std::vector<double> scores;
  scores.reserve(test.x.size());
  for (const auto& row : test.x) scores.push_back(model.score(row));
  return balanced_accuracy(scores, test.y);
}

ExperimentResult run_experiment(const CorpusManifest& manifest, int n_splits, std::uint64_t seed,
                                const TrainOptions& options) {
  require(n_splits >= 1, ErrorCode::kInvalidArgument, "n_splits must be >= 1");
  ExperimentResult res;
  for (int k = 0; k < n_splits; ++k) {
    const Split s = split(manifest, 0.5, derive_seed(seed, static_cast<std::uint64_t>(k)));
    const LinearModel model = train(gather(manifest, s.train), options);
    res.accuracies.push_back(evaluate(model, gather(manifest, s.test)));
  }
  const double n = static_cast<double>(res.accuracies.size());
  res.mean = std::accumulate(res.accuracies.begin(), res.accuracies.end(), 0.0) / n;
  if (res.accuracies.size() > 1) {
    double ss = 0.0;
    for (const double a : res.accuracies) ss += (a - res.mean) * (a - res.mean);
    res.stddev = std::sqrt(ss / (n - 1.0));
  }
  return res;
}

double cross_corpus_accuracy(const CorpusManifest& train_on, const CorpusManifest& test_on,
                             const TrainOptions& options) {
  std::vector<std::size_t> all_train(train_on.entries.size()), all_test(test_on.entries.size());
  std::iota(all_train.begin(), all_train.end(), std::size_t{0});
  std::iota(all_test.begin(), all_test.end(), std::size_t{0});
  return evaluate(train(gather(train_on, all_train), options), gather(test_on, all_test));
}

void write_model(std::ostream& out, const LinearModel& model, Variant variant, std::string_view provenance) {
  out << provenance << '\n';
  out << "mvglo-model 1\n";
  out << "variant " << variant_name(variant) << '\n';
  out << "dimension " << model.weights.size() << '\n';
  out << "bias " << format_double(model.bias) << '\n';
  out << "regularization " << format_double(model.regularization) << '\n';
  auto row = [&](std::string_view key, const std::vector<double>& v) {
    out << key;
    for (const double x : v) out << ' ' << format_double(x);
    out << '\n';
  };
  row("weights", model.weights);
  row("mean", model.standardizer.mean);
  row("scale", model.standardizer.scale);
}

LinearModel read_model(std::istream& in, Variant* variant) {
  LinearModel m;
  std::string line;
  std::size_t dim = 0;
  bool magic = false;
  auto numbers = [](std::istringstream& ls) {
    std::vector<double> v;
    for (std::string tok; ls >> tok;) v.push_back(parse_double(tok));
    return v;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "mvglo-model") {
      magic = true;
    } else if (key == "variant") {
      std::string name;
      ls >> name;
      if (variant) *variant = parse_variant(name);
    } else if (key == "dimension") {
      ls >> dim;
    } else if (key == "bias") {
      std::string v;
      ls >> v;
      m.bias = parse_double(v);
    } else if (key == "regularization") {
      std::string v;
      ls >> v;
      m.regularization = parse_double(v);
    } else if (key == "weights") {
      m.weights = numbers(ls);
    } else if (key == "mean") {
      m.standardizer.mean = numbers(ls);
    } else if (key == "scale") {
      m.standardizer.scale = numbers(ls);
    } else {
      fail(ErrorCode::kFormat, "unknown model key " + key);
    }
  }
  require(magic, ErrorCode::kFormat, "not an mvglo model file");
  require(m.weights.size() == dim && m.standardizer.mean.size() == dim && m.standardizer.scale.size() == dim,
          ErrorCode::kFormat, "model vectors disagree with the declared dimension");
  return m;
}

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows, std::string_view provenance) {
  out << provenance << '\n' << "variant,qp,rate,mean_acc,std_acc,n_splits\n";
  for (const ReportRow& r : rows) {
    out << variant_name(r.variant) << ',' << r.qp << ',' << format_double(r.rate) << ','
        << format_double(r.result.mean) << ',' << format_double(r.result.stddev) << ',' << r.n_splits << '\n';
  }
}

}  // namespace mvglo
