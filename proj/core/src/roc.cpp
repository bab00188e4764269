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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "revaudit/error.hpp"
#include "revaudit/stats.hpp"

namespace revaudit::stats {

RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw InvalidArgument("roc_auc: scores and labels differ in length");
  }
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw InvalidArgument("roc_auc: labels must be 0 or 1");
    }
    if (std::isnan(scores[i])) throw InvalidArgument("roc_auc: NaN score");
    (labels[i] == 1 ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0) {
    throw UndefinedStatistic("AUC undefined: only one class present");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocCurve curve;
  curve.points.push_back(
      RocPoint{std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  // Twice the Mann-Whitney U statistic; ties count one half.
  std::uint64_t twice_u = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    std::uint64_t group_pos = 0;
    std::uint64_t group_neg = 0;
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] == 1 ? group_pos : group_neg) += 1;
      ++i;
    }
    twice_u += group_neg * (2 * tp + group_pos);
    tp += group_pos;
    fp += group_neg;
    curve.points.push_back(RocPoint{s, static_cast<double>(fp) / static_cast<double>(neg),
                                    static_cast<double>(tp) / static_cast<double>(pos)});
  }
  curve.auc = static_cast<double>(twice_u) /
              (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
  return curve;
}

double auc_score(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw InvalidArgument("auc_score: scores and labels differ in length");
  }
  std::vector<std::pair<double, int>> sorted(scores.size());
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw InvalidArgument("auc_score: labels must be 0 or 1");
    }
    if (std::isnan(scores[i])) throw InvalidArgument("auc_score: NaN score");
    sorted[i] = {scores[i], labels[i]};
    pos += static_cast<std::uint64_t>(labels[i]);
  }
  const std::uint64_t neg = scores.size() - pos;
  if (pos == 0 || neg == 0) {
    throw UndefinedStatistic("AUC undefined: only one class present");
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Ascending sweep: each positive beats the negatives below its tie group.
  std::uint64_t twice_u = 0;
  std::uint64_t below = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double s = sorted[i].first;
    std::uint64_t group_pos = 0;
    std::uint64_t group_neg = 0;
    for (; i < sorted.size() && sorted[i].first == s; ++i) {
      (sorted[i].second == 1 ? group_pos : group_neg) += 1;
    }
    twice_u += group_pos * (2 * below + group_neg);
    below += group_neg;
  }
  return static_cast<double>(twice_u) /
         (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

double trapezoid_area(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) *
            (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

std::size_t calibration_bin(double p, std::size_t n_bins) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("calibration: probability outside [0,1]");
  }
  const auto n = static_cast<double>(n_bins);
  auto b = static_cast<std::size_t>(std::floor(p * n));
  // Correct for rounding in p * n so that b/n <= p < (b+1)/n holds with
  // the boundaries computed the same way as reported.
  if (b < n_bins && p >= static_cast<double>(b + 1) / n) ++b;
  if (b > 0 && p < static_cast<double>(b) / n) --b;
  return std::min(b, n_bins - 1);
}

CalibrationCurve calibration_curve(std::span<const double> probs,
                                   std::span<const int> labels,
                                   std::size_t n_bins) {
  if (probs.size() != labels.size()) {
    throw InvalidArgument("calibration: probabilities and labels differ in length");
  }
  if (n_bins == 0) throw InvalidArgument("calibration: n_bins must be >= 1");
  std::vector<double> sum_p(n_bins, 0.0);
  std::vector<std::size_t> positives(n_bins, 0);
  std::vector<std::size_t> counts(n_bins, 0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const auto b = calibration_bin(probs[i], n_bins);
    sum_p[b] += probs[i];
    positives[b] += labels[i] == 1 ? 1 : 0;
    ++counts[b];
  }
  CalibrationCurve curve;
  curve.n_bins = n_bins;
  const auto n = static_cast<double>(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (counts[b] == 0) continue;
    CalibrationBin bin;
    bin.lower = static_cast<double>(b) / n;
    bin.upper = static_cast<double>(b + 1) / n;
    bin.count = counts[b];
    bin.mean_predicted = std::clamp(sum_p[b] / static_cast<double>(counts[b]),
                                    bin.lower, bin.upper);
    bin.positive_rate =
        static_cast<double>(positives[b]) / static_cast<double>(counts[b]);
    curve.bins.push_back(bin);
  }
  return curve;
}

}  // namespace revaudit::stats
