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

#ifndef REVAUDIT_FAIRNESS_HPP_
#define REVAUDIT_FAIRNESS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace revaudit::fairness {

struct GroupedOutcome {
  std::string id;
  // Predicted probability, or a 0/1 prediction. True labels passed as
  // scores give the data-level measure.
  double score = 0.0;
  int y = 0;
  std::string group;
};

enum class EoMode { TruePositive, BothRates };

// Max pairwise gaps across groups. Each throws UndefinedStatistic with
// fewer than two groups, and names the offending group when a group lacks
// the rows a conditional needs.
double dp_gap(std::span<const GroupedOutcome> rows, double threshold = 0.5);
double eo_gap(std::span<const GroupedOutcome> rows, double threshold = 0.5,
              EoMode mode = EoMode::TruePositive);
double auc_gap(std::span<const GroupedOutcome> rows);

// Two-sample Kolmogorov-Smirnov statistic over the pooled sample points.
double cdf_max_disparity(std::span<const double> a, std::span<const double> b);

struct CdfStep {
  double x = 0.0;
  double cdf_a = 0.0;
  double cdf_b = 0.0;
};

// Both empirical CDFs at every distinct pooled point, ascending.
std::vector<CdfStep> cdf_steps(std::span<const double> a,
                               std::span<const double> b);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct GroupRates {
  std::string group;
  std::size_t n = 0;
  std::size_t positives = 0;
  std::size_t predicted_positive = 0;
  std::optional<double> positive_rate;
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> auc;
};

struct Measure {
  // Missing when fewer than two groups have a defined rate.
  std::optional<double> gap;
  // Pair attaining the gap: the groups with the largest and smallest rate.
  std::string group_high;
  std::string group_low;
  std::vector<std::string> dropped;
};

struct DisparityReport {
  std::string attribute;
  std::string feature_set;
  double threshold = 0.5;
  EoMode eo_mode = EoMode::TruePositive;
  std::vector<GroupRates> groups;
  Measure dp;
  Measure eo;
  Measure auc;
  std::vector<std::string> warnings;
};

// Groups with an undefined conditional are dropped from that measure and
// noted in warnings.
DisparityReport disparity_report(std::string attribute, std::string feature_set,
                                 std::span<const GroupedOutcome> rows,
                                 double threshold = 0.5,
                                 EoMode mode = EoMode::TruePositive);

struct TableRow {
  std::string attribute;
  const DisparityReport* base = nullptr;
  const DisparityReport* plus_r = nullptr;
};

// attribute,dp,dp_plus_r,eo,eo_plus_r,auc,auc_plus_r
std::string format_disparity_table(std::span<const TableRow> rows);

// attribute,feature_set,group,n,positives,predicted_positive,positive_rate,
// tpr,fpr,auc
std::string format_group_rates(std::span<const DisparityReport> reports);

// ---------------------------------------------------------------------------
// Marginal acceptance curves
// ---------------------------------------------------------------------------

struct RatedOutcome {
  std::string id;
  double rating = 0.0;
  int y = 0;
  std::string group;
};

struct MarginalPoint {
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;
  std::string group;
  std::size_t n = 0;
  std::size_t accepted = 0;
  double p = 0.0;
  double half_width = 0.0;
};

struct MarginalCurve {
  std::string attribute;
  double z = 1.96;
  // Occupied (bin, group) cells ordered by bin, then group.
  std::vector<MarginalPoint> points;
};

// Bins are [e_i, e_{i+1}) with the last bin closed. Rows outside the edges
// are not counted. Half-width is z * sqrt(p (1 - p) / n).
MarginalCurve marginal_curve(std::span<const RatedOutcome> rows,
                             std::span<const double> bin_edges,
                             double z = 1.96);

// One bin per distinct rating: edges at midpoints between consecutive
// values, outer edges mirrored from the nearest gap (0.5 for one value).
std::vector<double> attainable_rating_edges(std::span<const double> ratings);

// bin,group,p,ci_low,ci_high,n
std::string format_marginal_curve(const MarginalCurve& curve);

}  // namespace revaudit::fairness

#endif  // REVAUDIT_FAIRNESS_HPP_
