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

#include "revaudit/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>

#include "revaudit/error.hpp"
#include "revaudit/stats.hpp"
#include "revaudit/text.hpp"

namespace revaudit::fairness {

namespace {

struct Tally {
  std::size_t n = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t predicted = 0;
  std::size_t true_pos = 0;
  std::size_t false_pos = 0;
  std::vector<double> scores;
  std::vector<int> labels;
};

// Scores and labels are kept only when `keep_scores` is set (AUC).
std::map<std::string, Tally> tally(std::span<const GroupedOutcome> rows,
                                   double threshold, bool keep_scores = true) {
  std::map<std::string, Tally> groups;
  for (const auto& r : rows) {
    if (r.y != 0 && r.y != 1) {
      throw InvalidArgument("outcome label for '" + r.id + "' must be 0 or 1");
    }
    if (std::isnan(r.score)) {
      throw InvalidArgument("score for '" + r.id + "' is NaN");
    }
    auto& t = groups[r.group];
    if (keep_scores && t.n == 0) {
      t.scores.reserve(rows.size());
      t.labels.reserve(rows.size());
    }
    const bool hat = r.score >= threshold;
    ++t.n;
    t.predicted += hat ? 1 : 0;
    if (r.y == 1) {
      ++t.positives;
      t.true_pos += hat ? 1 : 0;
    } else {
      ++t.negatives;
      t.false_pos += hat ? 1 : 0;
    }
    if (keep_scores) {
      t.scores.push_back(r.score);
      t.labels.push_back(r.y);
    }
  }
  return groups;
}

double ratio(std::size_t num, std::size_t den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

void require_two(const std::map<std::string, Tally>& groups,
                 const std::string& measure) {
  if (groups.size() < 2) {
    throw UndefinedStatistic(measure + " undefined: fewer than 2 groups");
  }
}

// Largest minus smallest rate; ties keep the first group in name order.
Measure spread(const std::map<std::string, double>& rates) {
  Measure m;
  if (rates.size() < 2) return m;
  auto hi = rates.begin();
  auto lo = rates.begin();
  for (auto it = rates.begin(); it != rates.end(); ++it) {
    if (it->second > hi->second) hi = it;
    if (it->second < lo->second) lo = it;
  }
  m.gap = hi->second - lo->second;
  m.group_high = hi->first;
  m.group_low = lo->first;
  return m;
}

std::map<std::string, double> tpr_rates(const std::map<std::string, Tally>& g,
                                        std::vector<std::string>* dropped) {
  std::map<std::string, double> out;
  for (const auto& [name, t] : g) {
    if (t.positives == 0) {
      if (!dropped) {
        throw UndefinedStatistic("TPR undefined for group '" + name +
                                 "': no positive rows");
      }
      dropped->push_back(name);
      continue;
    }
    out[name] = ratio(t.true_pos, t.positives);
  }
  return out;
}

std::map<std::string, double> fpr_rates(const std::map<std::string, Tally>& g,
                                        std::vector<std::string>* dropped) {
  std::map<std::string, double> out;
  for (const auto& [name, t] : g) {
    if (t.negatives == 0) {
      if (!dropped) {
        throw UndefinedStatistic("FPR undefined for group '" + name +
                                 "': no negative rows");
      }
      dropped->push_back(name);
      continue;
    }
    out[name] = ratio(t.false_pos, t.negatives);
  }
  return out;
}

std::map<std::string, double> auc_rates(const std::map<std::string, Tally>& g,
                                        std::vector<std::string>* dropped) {
  std::map<std::string, double> out;
  for (const auto& [name, t] : g) {
    if (t.positives == 0 || t.negatives == 0) {
      if (!dropped) {
        throw UndefinedStatistic("AUC undefined for group '" + name +
                                 "': only one class present");
      }
      dropped->push_back(name);
      continue;
    }
    out[name] = stats::auc_score(t.scores, t.labels);
  }
  return out;
}

Measure eo_measure(const std::map<std::string, Tally>& g, EoMode mode,
                   std::vector<std::string>* dropped) {
  auto m = spread(tpr_rates(g, dropped));
  if (mode == EoMode::TruePositive) return m;
  std::vector<std::string> fpr_dropped;
  auto f = spread(fpr_rates(g, dropped ? &fpr_dropped : nullptr));
  if (dropped) {
    for (auto& name : fpr_dropped) {
      if (std::find(dropped->begin(), dropped->end(), name) == dropped->end()) {
        dropped->push_back(name);
      }
    }
  }
  if (!m.gap) return f;
  if (f.gap && *f.gap > *m.gap) return f;
  return m;
}

std::string optional_cell(const std::optional<double>& v) {
  return v ? text::format_double(*v) : std::string();
}

}  // namespace

double dp_gap(std::span<const GroupedOutcome> rows, double threshold) {
  const auto groups = tally(rows, threshold, false);
  require_two(groups, "DP");
  double hi = 0.0, lo = 1.0;
  for (const auto& [name, t] : groups) {
    const double rate = ratio(t.predicted, t.n);
    hi = std::max(hi, rate);
    lo = std::min(lo, rate);
  }
  return hi - lo;
}

double eo_gap(std::span<const GroupedOutcome> rows, double threshold,
              EoMode mode) {
  const auto groups = tally(rows, threshold, false);
  require_two(groups, "EO");
  if (mode != EoMode::TruePositive) return *eo_measure(groups, mode, nullptr).gap;
  double hi = 0.0, lo = 1.0;
  for (const auto& [name, t] : groups) {
    if (t.positives == 0) {
      throw UndefinedStatistic("TPR undefined for group '" + name +
                               "': no positive rows");
    }
    const double rate = ratio(t.true_pos, t.positives);
    hi = std::max(hi, rate);
    lo = std::min(lo, rate);
  }
  return hi - lo;
}

double auc_gap(std::span<const GroupedOutcome> rows) {
  const auto groups = tally(rows, 0.5);
  require_two(groups, "AUC gap");
  double hi = 0.0, lo = 1.0;
  for (const auto& [name, t] : groups) {
    if (t.positives == 0 || t.negatives == 0) {
      throw UndefinedStatistic("AUC undefined for group '" + name +
                               "': only one class present");
    }
    const double auc = stats::auc_score(t.scores, t.labels);
    hi = std::max(hi, auc);
    lo = std::min(lo, auc);
  }
  return hi - lo;
}

double cdf_max_disparity(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw InvalidArgument("CDF disparity needs two non-empty samples");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  if (std::any_of(sa.begin(), sa.end(), [](double v) { return std::isnan(v); }) ||
      std::any_of(sb.begin(), sb.end(), [](double v) { return std::isnan(v); })) {
    throw InvalidArgument("CDF disparity: NaN sample value");
  }
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const auto na = static_cast<std::int64_t>(sa.size());
  const auto nb = static_cast<std::int64_t>(sb.size());
  std::int64_t ia = 0;
  std::int64_t ib = 0;
  // |F_a - F_b| scaled by na * nb, kept in integers.
  std::int64_t best = 0;
  while (ia < na || ib < nb) {
    double x;
    if (ib >= nb || (ia < na && sa[static_cast<std::size_t>(ia)] <=
                                    sb[static_cast<std::size_t>(ib)])) {
      x = sa[static_cast<std::size_t>(ia)];
    } else {
      x = sb[static_cast<std::size_t>(ib)];
    }
    while (ia < na && sa[static_cast<std::size_t>(ia)] <= x) ++ia;
    while (ib < nb && sb[static_cast<std::size_t>(ib)] <= x) ++ib;
    best = std::max(best, std::abs(ia * nb - ib * na));
  }
  return static_cast<double>(best) /
         (static_cast<double>(na) * static_cast<double>(nb));
}

std::vector<CdfStep> cdf_steps(std::span<const double> a,
                               std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw InvalidArgument("CDF steps need two non-empty samples");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::vector<double> pooled = sa;
  pooled.insert(pooled.end(), sb.begin(), sb.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());
  std::vector<CdfStep> out;
  out.reserve(pooled.size());
  for (const double x : pooled) {
    const auto ca = std::upper_bound(sa.begin(), sa.end(), x) - sa.begin();
    const auto cb = std::upper_bound(sb.begin(), sb.end(), x) - sb.begin();
    out.push_back(CdfStep{x, ratio(static_cast<std::size_t>(ca), sa.size()),
                          ratio(static_cast<std::size_t>(cb), sb.size())});
  }
  return out;
}

DisparityReport disparity_report(std::string attribute, std::string feature_set,
                                 std::span<const GroupedOutcome> rows,
                                 double threshold, EoMode mode) {
  DisparityReport report;
  report.attribute = std::move(attribute);
  report.feature_set = std::move(feature_set);
  report.threshold = threshold;
  report.eo_mode = mode;
  const auto groups = tally(rows, threshold);

  std::map<std::string, double> dp_rates;
  for (const auto& [name, t] : groups) dp_rates[name] = ratio(t.predicted, t.n);
  report.dp = spread(dp_rates);
  {
    std::vector<std::string> dropped;
    report.eo = eo_measure(groups, mode, &dropped);
    report.eo.dropped = std::move(dropped);
  }
  {
    std::vector<std::string> dropped;
    report.auc = spread(auc_rates(groups, &dropped));
    report.auc.dropped = std::move(dropped);
  }

  for (const auto& [name, t] : groups) {
    GroupRates g;
    g.group = name;
    g.n = t.n;
    g.positives = t.positives;
    g.predicted_positive = t.predicted;
    g.positive_rate = ratio(t.predicted, t.n);
    if (t.positives > 0) g.tpr = ratio(t.true_pos, t.positives);
    if (t.negatives > 0) g.fpr = ratio(t.false_pos, t.negatives);
    if (t.positives > 0 && t.negatives > 0) {
      g.auc = stats::roc_auc(t.scores, t.labels).auc;
    }
    report.groups.push_back(std::move(g));
  }

  const std::string where = report.attribute + " (" + report.feature_set + ")";
  if (groups.size() < 2) {
    report.warnings.push_back(where + ": fewer than 2 groups; gaps undefined");
  }
  for (const auto& name : report.eo.dropped) {
    report.warnings.push_back(where + ": group '" + name +
                              "' dropped from EO (undefined conditional rate)");
  }
  for (const auto& name : report.auc.dropped) {
    report.warnings.push_back(where + ": group '" + name +
                              "' dropped from AUC gap (single class)");
  }
  return report;
}

std::string format_disparity_table(std::span<const TableRow> rows) {
  std::ostringstream os;
  os << "attribute,dp,dp_plus_r,eo,eo_plus_r,auc,auc_plus_r\n";
  auto cell = [](const DisparityReport* r,
                 const Measure DisparityReport::*measure) {
    return r ? optional_cell((r->*measure).gap) : std::string();
  };
  for (const auto& row : rows) {
    os << text::csv_escape(row.attribute) << ','
       << cell(row.base, &DisparityReport::dp) << ','
       << cell(row.plus_r, &DisparityReport::dp) << ','
       << cell(row.base, &DisparityReport::eo) << ','
       << cell(row.plus_r, &DisparityReport::eo) << ','
       << cell(row.base, &DisparityReport::auc) << ','
       << cell(row.plus_r, &DisparityReport::auc) << '\n';
  }
  return os.str();
}

std::string format_group_rates(std::span<const DisparityReport> reports) {
  std::ostringstream os;
  os << "attribute,feature_set,group,n,positives,predicted_positive,"
        "positive_rate,tpr,fpr,auc\n";
  for (const auto& r : reports) {
    for (const auto& g : r.groups) {
      os << text::csv_escape(r.attribute) << ',' << text::csv_escape(r.feature_set)
         << ',' << text::csv_escape(g.group) << ',' << g.n << ',' << g.positives
         << ',' << g.predicted_positive << ',' << optional_cell(g.positive_rate)
         << ',' << optional_cell(g.tpr) << ',' << optional_cell(g.fpr) << ','
         << optional_cell(g.auc) << '\n';
    }
  }
  return os.str();
}

MarginalCurve marginal_curve(std::span<const RatedOutcome> rows,
                             std::span<const double> bin_edges, double z) {
  if (bin_edges.size() < 2) {
    throw InvalidArgument("marginal curve needs at least two bin edges");
  }
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    if (!(bin_edges[i] > bin_edges[i - 1])) {
      throw InvalidArgument("bin edges must be strictly increasing");
    }
  }
  if (!(z >= 0.0)) throw InvalidArgument("z must be non-negative");

  const std::size_t n_bins = bin_edges.size() - 1;
  // (bin, group) -> (n, accepted)
  std::map<std::pair<std::size_t, std::string>, std::pair<std::size_t, std::size_t>>
      cells;
  for (const auto& r : rows) {
    if (r.y != 0 && r.y != 1) {
      throw InvalidArgument("outcome label for '" + r.id + "' must be 0 or 1");
    }
    const double v = r.rating;
    if (!(v >= bin_edges.front() && v <= bin_edges.back())) continue;
    auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), v);
    auto bin = static_cast<std::size_t>(it - bin_edges.begin()) - 1;
    bin = std::min(bin, n_bins - 1);
    auto& cell = cells[{bin, r.group}];
    ++cell.first;
    cell.second += static_cast<std::size_t>(r.y);
  }

  MarginalCurve curve;
  curve.z = z;
  for (const auto& [key, counts] : cells) {
    MarginalPoint pt;
    pt.lower = bin_edges[key.first];
    pt.upper = bin_edges[key.first + 1];
    pt.center = (pt.lower + pt.upper) / 2.0;
    pt.group = key.second;
    pt.n = counts.first;
    pt.accepted = counts.second;
    pt.p = ratio(pt.accepted, pt.n);
    pt.half_width = z * std::sqrt(pt.p * (1.0 - pt.p) / static_cast<double>(pt.n));
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

std::vector<double> attainable_rating_edges(std::span<const double> ratings) {
  std::vector<double> values(ratings.begin(), ratings.end());
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return !std::isfinite(v); }),
               values.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty()) return {};
  if (values.size() == 1) return {values[0] - 0.5, values[0] + 0.5};
  std::vector<double> edges;
  edges.reserve(values.size() + 1);
  edges.push_back(values[0] - (values[1] - values[0]) / 2.0);
  for (std::size_t i = 1; i < values.size(); ++i) {
    edges.push_back((values[i - 1] + values[i]) / 2.0);
  }
  const auto m = values.size();
  edges.push_back(values[m - 1] + (values[m - 1] - values[m - 2]) / 2.0);
  return edges;
}

std::string format_marginal_curve(const MarginalCurve& curve) {
  std::ostringstream os;
  os << "bin,group,p,ci_low,ci_high,n\n";
  for (const auto& pt : curve.points) {
    os << text::format_double(pt.center) << ',' << text::csv_escape(pt.group)
       << ',' << text::format_double(pt.p) << ','
       << text::format_double(std::max(0.0, pt.p - pt.half_width)) << ','
       << text::format_double(std::min(1.0, pt.p + pt.half_width)) << ','
       << pt.n << '\n';
  }
  return os.str();
}

}  // namespace revaudit::fairness
