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

#include <cmath>

#include <gtest/gtest.h>

#include "revaudit/error.hpp"
#include "revaudit/fairness.hpp"
#include "support.hpp"

using namespace revaudit::fairness;
using namespace revaudit::testing;

namespace {

std::vector<GroupedOutcome> rows_from(const std::string& group,
                                      const std::vector<double>& scores,
                                      const std::vector<int>& labels) {
  std::vector<GroupedOutcome> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.push_back({group + std::to_string(i), scores[i], labels[i], group});
  }
  return out;
}

std::vector<GroupedOutcome> concat(std::vector<GroupedOutcome> a,
                                   const std::vector<GroupedOutcome>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Every group has both labels; scores on a grid so ties occur.
std::vector<GroupedOutcome> random_rows(Gen& gen, int groups) {
  std::vector<GroupedOutcome> rows;
  for (int g = 0; g < groups; ++g) {
    const auto name = "g" + std::to_string(g);
    const int n = gen.integer(2, 25);
    for (int i = 0; i < n; ++i) {
      const int y = i < 2 ? i : (gen.coin() ? 1 : 0);
      rows.push_back({name + "_" + std::to_string(i),
                      gen.integer(0, 20) / 20.0, y, name});
    }
  }
  return rows;
}

}  // namespace

TEST(DpGap, Examples) {
  const auto rows = concat(rows_from("A", {1, 1, 0, 0}, {0, 0, 0, 0}),
                           rows_from("B", {1, 0, 0, 0}, {0, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(dp_gap(rows), 0.25);

  const auto same = concat(rows_from("A", {0.9, 0.1}, {1, 0}),
                           rows_from("B", {0.1, 0.9}, {0, 1}));
  EXPECT_DOUBLE_EQ(dp_gap(same), 0.0);

  std::vector<GroupedOutcome> three;
  for (auto [g, rate] : {std::pair{"a", 2}, {"b", 5}, {"c", 9}}) {
    for (int i = 0; i < 10; ++i) {
      three.push_back({g + std::to_string(i), i < rate ? 1.0 : 0.0, 0, g});
    }
  }
  EXPECT_NEAR(dp_gap(three), 0.7, 1e-15);
}

TEST(DpGap, NeedsTwoGroups) {
  EXPECT_THROW(dp_gap(rows_from("A", {1, 0}, {1, 0})),
               revaudit::UndefinedStatistic);
}

TEST(EoGap, Examples) {
  const auto rows = concat(rows_from("A", {1, 1}, {1, 1}),
                           rows_from("B", {1, 0}, {1, 1}));
  EXPECT_DOUBLE_EQ(eo_gap(rows), 0.5);
  const auto perfect = concat(rows_from("A", {1, 0}, {1, 0}),
                              rows_from("B", {1, 0, 1}, {1, 0, 1}));
  EXPECT_DOUBLE_EQ(eo_gap(perfect), 0.0);
  const auto single = concat(rows_from("A", {1}, {1}), rows_from("B", {1}, {1}));
  EXPECT_DOUBLE_EQ(eo_gap(single), 0.0);
}

TEST(EoGap, GroupWithoutPositivesIsNamed) {
  const auto rows = concat(rows_from("A", {1, 0}, {1, 0}),
                           rows_from("Lonely", {1, 0}, {0, 0}));
  try {
    eo_gap(rows);
    FAIL();
  } catch (const revaudit::UndefinedStatistic& e) {
    EXPECT_NE(std::string(e.what()).find("Lonely"), std::string::npos);
  }
}

TEST(EoGap, BothRatesAddsFalsePositiveGap) {
  const auto rows = concat(rows_from("A", {1, 0, 0}, {1, 0, 0}),
                           rows_from("B", {1, 1, 1}, {1, 0, 0}));
  EXPECT_DOUBLE_EQ(eo_gap(rows, 0.5, EoMode::TruePositive), 0.0);
  EXPECT_DOUBLE_EQ(eo_gap(rows, 0.5, EoMode::BothRates), 1.0);
}

TEST(AucGap, Examples) {
  const auto opposite = concat(rows_from("A", {0.9, 0.1}, {1, 0}),
                               rows_from("B", {0.1, 0.9}, {1, 0}));
  EXPECT_DOUBLE_EQ(auc_gap(opposite), 1.0);
  const auto same = concat(rows_from("A", {0.9, 0.1, 0.5}, {1, 0, 1}),
                           rows_from("B", {0.9, 0.1, 0.5}, {1, 0, 1}));
  EXPECT_DOUBLE_EQ(auc_gap(same), 0.0);
  // 0.75: 3 of 4 pairs ordered; 0.60: 3 of 5 pairs ordered.
  const auto a = rows_from("A", {0.8, 0.4, 0.6, 0.2}, {1, 1, 0, 0});
  const auto b = rows_from("B", {0.5, 0.9, 0.1, 0.3, 0.4, 0.7},
                           {1, 0, 0, 0, 0, 0});
  const auto rows = concat(a, b);
  EXPECT_NEAR(auc_gap(rows), 0.15, 1e-12);
  EXPECT_NEAR(auc_gap(rows), auc_gap_oracle(rows), 1e-12);
}

TEST(AucGap, SingleClassGroupIsNamed) {
  const auto rows = concat(rows_from("A", {0.9, 0.1}, {1, 0}),
                           rows_from("Solo", {0.4, 0.6}, {1, 1}));
  try {
    auc_gap(rows);
    FAIL();
  } catch (const revaudit::UndefinedStatistic& e) {
    EXPECT_NE(std::string(e.what()).find("Solo"), std::string::npos);
  }
}

TEST(Gaps, ExhaustiveSmallInstancesMatchBruteForce) {
  // Every (y, yhat) assignment over n <= 6 rows split into 2 or 3 contiguous
  // groups; the measures depend on rows only through per-group counts.
  for (int n = 2; n <= 6; ++n) {
    for (int g = 2; g <= 3 && g <= n; ++g) {
      for (int cut1 = 1; cut1 < n; ++cut1) {
        for (int cut2 = (g == 3 ? cut1 + 1 : n); cut2 <= n - (g == 3 ? 1 : 0);
             ++cut2) {
          for (int bits = 0; bits < (1 << (2 * n)); ++bits) {
            std::vector<GroupedOutcome> rows;
            for (int i = 0; i < n; ++i) {
              const std::string grp = i < cut1 ? "a" : (i < cut2 ? "b" : "c");
              rows.push_back({std::to_string(i),
                              static_cast<double>((bits >> (2 * i)) & 1),
                              (bits >> (2 * i + 1)) & 1, grp});
            }
            ASSERT_NEAR(dp_gap(rows), dp_oracle(rows), 1e-12);
            const auto groups = oracle_groups(rows, 0.5);
            bool eo_defined = true, auc_defined = true;
            for (const auto& [name, o] : groups) {
              eo_defined = eo_defined && o.pos > 0;
              auc_defined = auc_defined && o.pos > 0 && o.pos < o.n;
            }
            if (eo_defined) {
              ASSERT_NEAR(eo_gap(rows), eo_oracle(rows), 1e-12);
            } else {
              ASSERT_THROW(eo_gap(rows), revaudit::UndefinedStatistic);
            }
            if (auc_defined) {
              ASSERT_NEAR(auc_gap(rows), auc_gap_oracle(rows), 1e-12);
            } else {
              ASSERT_THROW(auc_gap(rows), revaudit::UndefinedStatistic);
            }
          }
        }
      }
    }
  }
}

TEST(Gaps, BoundedAndInvariantUnderGroupRelabeling) {
  Gen gen(33);
  for (int t = 0; t < 300; ++t) {
    auto rows = random_rows(gen, gen.integer(2, 4));
    const double dp = dp_gap(rows), auc = auc_gap(rows);
    for (double v : {dp, auc}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    auto relabeled = rows;
    for (auto& r : relabeled) r.group = "renamed_" + r.group + "_x";
    EXPECT_EQ(dp_gap(relabeled), dp);
    EXPECT_EQ(auc_gap(relabeled), auc);
    EXPECT_EQ(eo_gap(relabeled), eo_gap(rows));
  }
}

TEST(Gaps, DuplicatingAGroupChangesNothing) {
  Gen gen(34);
  for (int t = 0; t < 300; ++t) {
    auto rows = random_rows(gen, gen.integer(2, 3));
    auto doubled = rows;
    for (const auto& r : rows) {
      if (r.group == "g0") doubled.push_back({r.id + "'", r.score, r.y, r.group});
    }
    EXPECT_NEAR(dp_gap(doubled), dp_gap(rows), 1e-15);
    EXPECT_NEAR(eo_gap(doubled), eo_gap(rows), 1e-15);
    EXPECT_NEAR(auc_gap(doubled), auc_gap(rows), 1e-15);
  }
}

TEST(Gaps, MonotoneTransformInvariance) {
  Gen gen(35);
  for (int t = 0; t < 200; ++t) {
    auto rows = random_rows(gen, gen.integer(2, 3));
    // Strictly increasing and fixes 0.5, so each score keeps its side.
    const double k = gen.real(0.3, 3.0);
    auto mapped = rows;
    for (auto& r : mapped) {
      const double d = r.score - 0.5;
      r.score = 0.5 + std::copysign(std::pow(std::abs(d), k), d) * 0.9;
    }
    EXPECT_EQ(dp_gap(mapped), dp_gap(rows));
    EXPECT_EQ(eo_gap(mapped), eo_gap(rows));
    EXPECT_EQ(auc_gap(mapped), auc_gap(rows));
  }
}

TEST(Cdf, Examples) {
  const std::vector<double> a{0.1, 0.5, 0.9}, b{0.5, 0.9};
  EXPECT_DOUBLE_EQ(cdf_max_disparity(a, a), 0.0);
  EXPECT_DOUBLE_EQ(cdf_max_disparity(std::vector<double>{0.1, 0.2},
                                     std::vector<double>{0.8, 0.9}), 1.0);
  EXPECT_NEAR(cdf_max_disparity(a, b), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(cdf_max_disparity(std::vector<double>{}, b),
               revaudit::InvalidArgument);
}

TEST(Cdf, MatchesBruteForceAndIsSymmetric) {
  Gen gen(36);
  for (int t = 0; t < 500; ++t) {
    const auto a = gen.tied_scores(static_cast<std::size_t>(gen.integer(1, 40)), 15);
    const auto b = gen.tied_scores(static_cast<std::size_t>(gen.integer(1, 40)), 15);
    const double d = cdf_max_disparity(a, b);
    EXPECT_NEAR(d, ks_oracle(a, b), 1e-12);
    EXPECT_EQ(d, cdf_max_disparity(b, a));
    bool coincide = true;
    for (const auto& s : cdf_steps(a, b)) coincide = coincide && s.cdf_a == s.cdf_b;
    EXPECT_EQ(d == 0.0, coincide);
  }
}

TEST(Cdf, StepsCoverPooledPointsAscending) {
  const auto steps = cdf_steps(std::vector<double>{0.3, 0.1},
                               std::vector<double>{0.2, 0.3});
  ASSERT_EQ(steps.size(), 3u);
  EXPECT_EQ(steps[0].x, 0.1);
  EXPECT_DOUBLE_EQ(steps[0].cdf_a, 0.5);
  EXPECT_DOUBLE_EQ(steps[1].cdf_b, 0.5);
  EXPECT_DOUBLE_EQ(steps[2].cdf_a, 1.0);
  EXPECT_DOUBLE_EQ(steps[2].cdf_b, 1.0);
}

TEST(Report, PairsAttainTheGapsAndDropUndefinedGroups) {
  const auto rows = concat(
      concat(rows_from("A", {0.9, 0.8, 0.2}, {1, 0, 0}),
             rows_from("B", {0.1, 0.6, 0.3}, {1, 1, 0})),
      rows_from("C", {0.7, 0.2}, {0, 0}));
  const auto r = disparity_report("geo", "+rev", rows);
  ASSERT_EQ(r.groups.size(), 3u);
  EXPECT_NEAR(*r.dp.gap, 2.0 / 3.0 - 1.0 / 3.0, 1e-15);
  EXPECT_EQ(r.dp.group_high, "A");
  EXPECT_TRUE(r.dp.group_low == "B");
  EXPECT_EQ(r.eo.dropped, std::vector<std::string>{"C"});
  EXPECT_EQ(r.auc.dropped, std::vector<std::string>{"C"});
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_NEAR(*r.eo.gap, 0.5, 1e-15);

  const auto table_rows = std::vector<TableRow>{{"geo", &r, &r}};
  const auto table = format_disparity_table(table_rows);
  EXPECT_EQ(table.substr(0, table.find('\n')),
            "attribute,dp,dp_plus_r,eo,eo_plus_r,auc,auc_plus_r");
  const auto rates = format_group_rates(std::vector<DisparityReport>{r});
  EXPECT_EQ(rates.substr(0, rates.find('\n')),
            "attribute,feature_set,group,n,positives,predicted_positive,"
            "positive_rate,tpr,fpr,auc");
}

TEST(Marginal, Examples) {
  std::vector<RatedOutcome> rows;
  for (int i = 0; i < 8; ++i) rows.push_back({"a" + std::to_string(i), 5.2, i < 4, "x"});
  for (int i = 0; i < 3; ++i) rows.push_back({"b" + std::to_string(i), 7.5, 1, "x"});
  rows.push_back({"c", 2.5, 1, "y"});
  const std::vector<double> edges{1, 4, 6, 8, 10};
  const auto c = marginal_curve(rows, edges);
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_EQ(c.points[0].group, "y");
  EXPECT_EQ(c.points[0].n, 1u);
  EXPECT_EQ(c.points[0].half_width, 0.0);
  EXPECT_EQ(c.points[1].p, 0.5);
  EXPECT_NEAR(c.points[1].half_width, 1.96 * std::sqrt(0.25 / 8), 1e-12);
  EXPECT_NEAR(c.points[1].half_width, 0.3465, 1e-4);
  EXPECT_EQ(c.points[1].center, 5.0);
  EXPECT_EQ(c.points[2].p, 1.0);
  EXPECT_EQ(c.points[2].half_width, 0.0);
}

TEST(Marginal, LastBinIsClosedAndOutsideRowsSkipped) {
  const std::vector<RatedOutcome> rows{{"a", 10.0, 1, "g"}, {"b", 0.5, 1, "g"},
                                       {"c", 4.0, 0, "g"}};
  const std::vector<double> edges{1, 4, 10};
  const auto c = marginal_curve(rows, edges);
  ASSERT_EQ(c.points.size(), 1u);
  EXPECT_EQ(c.points[0].lower, 4.0);
  EXPECT_EQ(c.points[0].n, 2u);
  EXPECT_THROW(marginal_curve(rows, std::vector<double>{1, 1, 2}),
               revaudit::InvalidArgument);
}

TEST(Marginal, PlantedBinsReproduceRates) {
  Gen gen(37);
  for (int t = 0; t < 100; ++t) {
    std::vector<RatedOutcome> rows;
    std::map<std::pair<int, std::string>, std::pair<int, int>> planted;
    for (int bin = 0; bin < 5; ++bin) {
      for (const auto* grp : {"p", "q"}) {
        const int n = gen.integer(0, 30);
        const int k = n == 0 ? 0 : gen.integer(0, n);
        if (n > 0) planted[{bin, grp}] = {n, k};
        for (int i = 0; i < n; ++i) {
          rows.push_back({std::to_string(rows.size()), bin + gen.real(0, 0.99),
                          i < k ? 1 : 0, grp});
        }
      }
    }
    const std::vector<double> edges{0, 1, 2, 3, 4, 5};
    const auto c = marginal_curve(rows, edges, 1.96);
    ASSERT_EQ(c.points.size(), planted.size());
    std::size_t total = 0;
    for (const auto& pt : c.points) {
      const auto [n, k] = planted.at({static_cast<int>(pt.lower), pt.group});
      const double p = static_cast<double>(k) / n;
      EXPECT_EQ(pt.n, static_cast<std::size_t>(n));
      EXPECT_EQ(pt.p, p);
      EXPECT_NEAR(pt.half_width, 1.96 * std::sqrt(p * (1 - p) / n), 1e-12);
      total += pt.n;
    }
    EXPECT_EQ(total, rows.size());
  }
}

TEST(Marginal, AttainableEdgesAndCsv) {
  const std::vector<double> ratings{5.0, 6.0, 5.0, 6.5};
  EXPECT_EQ(attainable_rating_edges(ratings),
            (std::vector<double>{4.5, 5.5, 6.25, 6.75}));
  EXPECT_EQ(attainable_rating_edges(std::vector<double>{3.0}),
            (std::vector<double>{2.5, 3.5}));
  MarginalCurve c;
  c.attribute = "geo";
  c.points.push_back({4.5, 5.5, 5.0, "true", 2, 2, 1.0, 0.0});
  const auto csv = format_marginal_curve(c);
  EXPECT_EQ(csv, "bin,group,p,ci_low,ci_high,n\n5,true,1,1,1,2\n");
}
