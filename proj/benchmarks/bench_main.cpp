/*
 * Copyright 2026 The revaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <random>

#include <benchmark/benchmark.h>

#include "revaudit/fairness.hpp"
#include "revaudit/linkage.hpp"
#include "revaudit/stats.hpp"

namespace {

using namespace revaudit;

std::vector<double> uniform_scores(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(n);
  for (auto& v : s) v = u(rng);
  return s;
}

std::vector<int> coin_labels(std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.3);
  std::vector<int> y(n);
  for (auto& v : y) v = coin(rng) ? 1 : 0;
  y[0] = 0;
  y[1] = 1;
  return y;
}

void BM_RocAuc(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto s = uniform_scores(n, rng);
  const auto y = coin_labels(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(stats::roc_auc(s, y).auc);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RocAuc)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

void BM_AucScore(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto s = uniform_scores(n, rng);
  const auto y = coin_labels(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(stats::auc_score(s, y));
}
BENCHMARK(BM_AucScore)->RangeMultiplier(10)->Range(100, 100000);

void BM_FairnessGaps(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto s = uniform_scores(n, rng);
  const auto y = coin_labels(n, rng);
  std::vector<fairness::GroupedOutcome> rows;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({std::to_string(i), s[i], y[i], i % 2 == 0 ? "true" : "false"});
  }
  rows[2].y = 1;
  rows[3].y = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fairness::dp_gap(rows));
    benchmark::DoNotOptimize(fairness::eo_gap(rows));
    benchmark::DoNotOptimize(fairness::auc_gap(rows));
  }
}
BENCHMARK(BM_FairnessGaps)->Arg(8)->Arg(2000)->Arg(100000);

void BM_NormalizedLevenshtein(benchmark::State& state) {
  const std::string a = "carnegie mellon university";
  const std::string b = "Carnegie-Mellon Univ., Pittsburgh";
  for (auto _ : state) benchmark::DoNotOptimize(linkage::normalized_levenshtein(a, b));
}
BENCHMARK(BM_NormalizedLevenshtein);

void BM_FitLogistic(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = state.range(0);
  const Eigen::Index p = 40;
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n), w(p);
  for (Eigen::Index j = 0; j < p; ++j) w(j) = normal(rng) / 4;
  std::vector<std::string> cols;
  for (Eigen::Index j = 0; j < p; ++j) cols.push_back("x" + std::to_string(j));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = normal(rng);
    y(i) = u(rng) < stats::sigmoid(x.row(i).dot(w)) ? 1.0 : 0.0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(stats::fit_logistic(x, y, cols).intercept);
}
BENCHMARK(BM_FitLogistic)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
