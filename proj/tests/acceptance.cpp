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

// Acceptance checks. One PASS/FAIL line per criterion; nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mvglo/glo_features.hpp"
#include "mvglo/pipeline.hpp"
#include "mvglo/stats_probe.hpp"
#include "mvglo/stego_sim.hpp"
#include "test_util.hpp"

namespace {

using namespace mvglo;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int g_failed = 0;

void report(int n, const char* name, bool ok, const std::string& details, Clock::time_point start) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%s %d. %s: %s (%.1fs)\n", ok ? "PASS" : "FAIL", n, name, details.c_str(), secs);
  std::fflush(stdout);
  g_failed += ok ? 0 : 1;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Codeword enumeration: lengths 1, 3, 3, 5, 5, 5, 5, ... in codeNum order,
// with k > 0 at 2k-1 and k <= 0 at -2k.
int enumerated_bits(int k) {
  const long code_num = k > 0 ? 2L * k - 1 : -2L * k;
  long seen = 0;
  for (int m = 0;; ++m) {
    seen += 1L << m;
    if (code_num < seen) return 2 * m + 1;
  }
}

void criterion1() {
  const auto t = Clock::now();
  const double l15 = lambda_of_qp(15).lambda;
  const double l12 = lambda_of_qp(12).lambda;
  const bool ok = std::fabs(l15 - 1.3038) <= 1e-3 && l12 == std::sqrt(0.85);
  report(1, "lambda formula", ok, fmt("lambda(15)=%.6f", l15) + fmt(" lambda(12)=%.17g", l12), t);
}

void criterion2() {
  const auto t = Clock::now();
  int mismatches = 0;
  for (int k = -1024; k <= 1024; ++k) mismatches += exp_golomb_se_bits(k) != enumerated_bits(k);
  const bool ladder = exp_golomb_se_bits(0) == 1 && exp_golomb_se_bits(1) == 3 && exp_golomb_se_bits(-1) == 3 &&
                      exp_golomb_se_bits(2) == 5 && exp_golomb_se_bits(-2) == 5 && exp_golomb_se_bits(3) == 5 &&
                      exp_golomb_se_bits(-3) == 5;
  report(2, "exp-Golomb rate ladder", mismatches == 0 && ladder,
         std::to_string(mismatches) + " mismatches over |k|<=1024", t);
}

void criterion3(const CoverCorpus& corpus) {
  const auto t = Clock::now();
  Rng rng(2024);
  const double lambda = lambda_of_qp(15).lambda;
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const auto& seq = corpus.coded[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(corpus.coded.size()) - 1))];
    const auto k = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(seq.frames.size()) - 1));
    const auto& f = seq.frames[k];
    const auto& r = f.records[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(f.records.size()) - 1))];
    const int x = (r.block_index % f.mb_cols) * kMacroblockSize;
    const int y = (r.block_index / f.mb_cols) * kMacroblockSize;
    const Frame& ref = seq.reference_for(k);
    const CostMatrix m = cost_matrix(BlockView::in_frame(f.reconstructed, x, y), ref, r.mv, r.pmv, lambda);
    for (int i = 1; i <= 9; ++i) {
      for (int j = 1; j <= 9; ++j) {
        const MotionVector v = r.mv + grid_offset(j);
        const MotionVector d = v - (r.pmv + grid_offset(i));
        const double rate = lambda * (enumerated_bits(d.h) + enumerated_bits(d.v));
        worst = std::max(worst, std::fabs(m.at(DistortionKind::kSad, i, j) -
                                          (testing::naive_sad(f.reconstructed, x, y, ref, v) + rate)));
        worst = std::max(worst, std::fabs(m.at(DistortionKind::kSatd, i, j) -
                                          (testing::naive_satd(f.reconstructed, x, y, ref, v) + rate)));
      }
    }
  }
  report(3, "cost matrix vs naive recomputation", worst <= 1e-12, fmt("max |diff| %.3g over 1000 blocks", worst), t);
}

void criterion4(const CoverCorpus& corpus) {
  const auto t = Clock::now();
  const double lambda = lambda_of_qp(15).lambda;
  double worst_exp = 0.0, worst_line = 0.0, worst_tied = 0.0;
  int tie_free = 0, lines = 0;
  for (const auto& seq : corpus.coded) {
    const auto costs = sequence_cost_matrices(seq, lambda);
    for (auto d : {DistortionKind::kSad, DistortionKind::kSatd}) {
      for (const RawFeature& f : {f2_glo_mv(costs, d), f4_glo_pmv(costs, d)}) {
        worst_exp = std::max(worst_exp, std::fabs(std::accumulate(f.values.begin(), f.values.end(), 0.0) - 1.0));
      }
      for (const RawFeature& f : {f1_glo_mv(costs, d), f3_glo_pmv(costs, d)}) {
        ++lines;
        // With ties every extra minimiser adds 1/L to the total.
        const double total = std::accumulate(f.values.begin(), f.values.end(), 0.0);
        worst_tied = std::max(worst_tied, std::fabs(total - 9.0 - static_cast<double>(f.extra_winners) /
                                                                    static_cast<double>(f.blocks)));
        if (f.extra_winners != 0) continue;
        ++tie_free;
        // f1 rows and f3 columns are both stored as contiguous runs of 9.
        for (int c = 0; c < 9; ++c) {
          double s = 0.0;
          for (int x = 0; x < 9; ++x) s += f.values[static_cast<std::size_t>(9 * c + x)];
          worst_line = std::max(worst_line, std::fabs(s - 1.0));
        }
      }
    }
  }
  const bool ok = worst_exp <= 1e-9 && worst_line <= 1e-9 && worst_tied <= 1e-9 && tie_free > 0;
  report(4, "feature normalisation", ok,
         fmt("max f2/f4 deviation %.3g", worst_exp) + fmt(", max f1/f3 line deviation %.3g", worst_line) + " on " +
             std::to_string(tie_free) + "/" + std::to_string(lines) + " tie-free vectors" +
             fmt(", tie-adjusted totals within %.3g", worst_tied),
         t);
}

CostMatrix transformed(const CostMatrix& m, int g) {
  CostMatrix out = m;
  for (int i = 1; i <= 9; ++i) {
    for (int j = 1; j <= 9; ++j) {
      const auto dst = static_cast<std::size_t>(9 * (i - 1) + (j - 1));
      const auto src = static_cast<std::size_t>(9 * (dihedral_index(g, i) - 1) + (dihedral_index(g, j) - 1));
      out.j_sad[dst] = m.j_sad[src];
      out.j_satd[dst] = m.j_satd[src];
    }
  }
  for (int j = 1; j <= 9; ++j) {
    out.sad[static_cast<std::size_t>(j - 1)] = m.sad[static_cast<std::size_t>(dihedral_index(g, j) - 1)];
    out.satd[static_cast<std::size_t>(j - 1)] = m.satd[static_cast<std::size_t>(dihedral_index(g, j) - 1)];
  }
  return out;
}

void criterion5(const CoverCorpus& corpus, const std::vector<CodedSequence>& stego) {
  const auto t = Clock::now();
  const bool dims = variant_dimension(Variant::kGloMv36) == 36 && variant_dimension(Variant::kGloPmv28) == 28 &&
                    extract(corpus.coded.front(), Variant::kGloMv36).values.size() == 36 &&
                    extract(corpus.coded.front(), Variant::kGloPmv28).values.size() == 28;
  const double lambda = lambda_of_qp(15).lambda;
  double worst = 0.0;
  bool singletons = true;
  for (std::size_t s = 0; s < 10; ++s) {
    for (const auto* seq : {&corpus.coded[s], &stego[s]}) {
      const auto costs = sequence_cost_matrices(*seq, lambda);
      const FeatureSet base = compute_features(costs);
      const auto sym = select_variant(base, Variant::kGlo64).values;
      for (std::size_t b = 0; b < 4; ++b) singletons &= sym[9 * b + 8] == base.glo_mv[81 * b + 40];
      singletons &= sym[36 + 13] == base.glo_pmv[40] && sym[36 + 27] == base.glo_pmv[81 + 40];
      for (int g = 1; g < 8; ++g) {
        std::vector<CostMatrix> moved;
        moved.reserve(costs.size());
        for (const auto& m : costs) moved.push_back(transformed(m, g));
        const auto other = select_variant(compute_features(moved), Variant::kGlo64).values;
        for (std::size_t k = 0; k < sym.size(); ++k) worst = std::max(worst, std::fabs(other[k] - sym[k]));
      }
    }
  }
  report(5, "symmetrisation", dims && singletons && worst <= 1e-12,
         std::string("dims ") + (dims ? "36/28" : "wrong") + fmt(", max dihedral deviation %.3g", worst) +
             ", singleton cells " + (singletons ? "exact" : "differ"),
         t);
}

void criterion6(const CoverCorpus& corpus) {
  const auto t = Clock::now();
  std::size_t mismatches = 0;
  for (const auto& seq : corpus.coded) {
    const auto costs = sequence_cost_matrices(seq, lambda_of_qp(15).lambda);
    const FeatureSet set = compute_features(costs);
    const auto full = select_variant(set, Variant::kGloMv324).values;
    const auto npe = select_variant(set, Variant::kNpe36).values;
    for (std::size_t b = 0; b < 4; ++b) {
      for (std::size_t j = 0; j < 9; ++j) mismatches += npe[9 * b + j] != full[81 * b + 36 + j];
    }
  }
  report(6, "NPE-36 containment", mismatches == 0, std::to_string(mismatches) + " mismatching coordinates", t);
}

void criterion7(const CoverCorpus& corpus, const PipelineConfig& cfg) {
  const auto t = Clock::now();
  const auto rows = change_rate_sweep(corpus.coded, corpus.originals, cfg.sweep_rates, derive_seed(cfg.seed, 7));
  bool mv_pmv = true, pmv_bit = true, monotone = true;
  std::string table;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    mv_pmv &= rows[k].mv_rate > rows[k].pmv_rate;
    pmv_bit &= rows[k].pmv_rate > rows[k].bitrate_rate;
    if (k > 0) {
      monotone &= rows[k].mv_rate >= rows[k - 1].mv_rate && rows[k].pmv_rate >= rows[k - 1].pmv_rate &&
                  rows[k].bitrate_rate >= rows[k - 1].bitrate_rate;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, " p=%.2f:%.3f/%.3f/%.3f", rows[k].rate, rows[k].mv_rate, rows[k].pmv_rate,
                  rows[k].bitrate_rate);
    table += buf;
  }
  report(7, "embedding-effect orderings", mv_pmv && pmv_bit && monotone,
         std::string("mv>pmv ") + (mv_pmv ? "yes" : "no") + ", pmv>bitrate " + (pmv_bit ? "yes" : "no") +
             ", monotone " + (monotone ? "yes" : "no") + "; mv/pmv/bitrate" + table,
         t);
}

void criterion8(const CoverCorpus& corpus, const std::vector<CodedSequence>& low,
                const std::vector<CodedSequence>& high) {
  const auto t = Clock::now();
  const FourCaseReport a = four_case_report(corpus.coded, low, 0.05);
  const FourCaseReport b = four_case_report(corpus.coded, high, 0.5);
  const auto& o = b.optimality;
  const bool ok = b.occurrence[0] < a.occurrence[0] && o[0] > o[2] && o[2] > o[1] && std::fabs(o[1] - o[3]) < 0.08;
  char buf[256];
  std::snprintf(buf, sizeof buf, "occ(Case1) %.3f at p=0.05 vs %.3f at p=0.5; opt %.3f/%.3f/%.3f/%.3f",
                a.occurrence[0], b.occurrence[0], o[0], o[1], o[2], o[3]);
  report(8, "four-case structure", ok, buf, t);
}

void criterion9(const CoverCorpus& corpus, const std::vector<CodedSequence>& high) {
  const auto t = Clock::now();
  const HeatmapGrid cover = optimality_heatmaps(corpus.coded, HeatmapDirection::kMv);
  std::string peaks;
  bool centre = true;
  for (int i = 1; i <= 9; ++i) {
    centre &= cover.argmax(i) == 5;
    peaks += std::to_string(cover.argmax(i));
  }
  const HeatmapGrid stego = optimality_heatmaps(high, HeatmapDirection::kPmv);
  const int j4 = stego.argmax(4);
  report(9, "heatmap structure", centre && j4 == 4,
         "cover MV argmax per i " + peaks + ", stego PMV argmax for j=4 is " + std::to_string(j4), t);
}

std::map<std::string, double> report_means(const std::vector<ReportRow>& rows, int qp, double rate) {
  std::map<std::string, double> out;
  for (const auto& r : rows) {
    if (r.qp == qp && r.rate == rate) out[std::string(variant_name(r.variant))] = r.result.mean;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "mvglo_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  try {
    const PipelineConfig cfg;
    criterion1();
    criterion2();

    const auto t_corpus = Clock::now();
    const CoverCorpus corpus = build_cover_corpus(cfg, 15);
    const auto low = embed_corpus(cfg, corpus, 0.05);
    const auto high = embed_corpus(cfg, corpus, 0.5);
    std::printf("INFO default corpus: %zu sequences, %zu inter blocks each (%.1fs)\n", corpus.coded.size(),
                corpus.coded.front().block_count(),
                std::chrono::duration<double>(Clock::now() - t_corpus).count());

    criterion3(corpus);
    criterion4(corpus);
    criterion5(corpus, high);
    criterion6(corpus);
    criterion7(corpus, cfg);
    criterion8(corpus, low, high);
    criterion9(corpus, high);

    auto t = Clock::now();
    const PipelineResult first = run_pipeline(cfg, root / "run1");
    const double minutes = std::chrono::duration<double>(Clock::now() - t).count() / 60.0;
    auto m = report_means(first.report, 15, 0.4);
    const double glo = m["GLO-64"], npe = m["NPE-36"], aoso = m["AoSO-18"];
    char buf[256];
    std::snprintf(buf, sizeof buf, "GLO-64 %.4f, NPE-36 %.4f, AoSO-18 %.4f; pipeline %.1f min", glo, npe, aoso,
                  minutes);
    report(10, "detector orderings", glo >= npe - 0.02 && glo >= aoso + 0.05 && glo >= 0.70 && minutes < 15.0, buf,
           t);

    t = Clock::now();
    const PipelineResult second = run_pipeline(cfg, root / "run2");
    std::size_t differing = 0;
    for (const auto& p : first.outputs) {
      const fs::path other = root / "run2" / p.filename();
      differing += !fs::exists(other) || testing::slurp(p) != testing::slurp(other);
    }
    differing += first.outputs.size() != second.outputs.size();
    report(11, "determinism", differing == 0,
           std::to_string(first.outputs.size()) + " files compared, " + std::to_string(differing) + " differ", t);
  } catch (const std::exception& e) {
    std::printf("FAIL aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
