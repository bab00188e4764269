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
#include <limits>

#include "revaudit/error.hpp"
#include "revaudit/features.hpp"
#include "revaudit/text.hpp"

namespace revaudit::features {

namespace {

class TripleAccumulator {
 public:
  void add(double v) {
    sum_ += v;
    max_ = std::max(max_, v);
    min_ = std::min(min_, v);
    ++n_;
  }
  bool empty() const { return n_ == 0; }
  Triple result() const {
    Triple t;
    t.avg = sum_ / static_cast<double>(n_);
    // Guard the invariant min <= avg <= max against rounding in the mean.
    t.avg = std::clamp(t.avg, min_, max_);
    t.max = max_;
    t.min = min_;
    return t;
  }

 private:
  double sum_ = 0.0;
  double max_ = -std::numeric_limits<double>::infinity();
  double min_ = std::numeric_limits<double>::infinity();
  std::size_t n_ = 0;
};

}  // namespace

SubmissionAggregates submission_aggregates(
    std::span<const corpus::Review* const> reviews) {
  if (reviews.empty()) {
    throw UndefinedStatistic("review aggregates undefined: no reviews");
  }
  TripleAccumulator rating, confidence, sentiment, length;
  for (const auto* r : reviews) {
    rating.add(r->rating);
    confidence.add(r->confidence);
    length.add(static_cast<double>(r->text_len));
    if (r->sentiment) sentiment.add(*r->sentiment);
  }
  SubmissionAggregates out;
  out.rating = rating.result();
  out.confidence = confidence.result();
  out.review_length = length.result();
  if (!sentiment.empty()) out.sentiment = sentiment.result();
  out.n_review = static_cast<int>(reviews.size());
  return out;
}

SubmissionAggregates submission_aggregates(
    std::span<const corpus::Review> reviews) {
  std::vector<const corpus::Review*> ptrs;
  ptrs.reserve(reviews.size());
  for (const auto& r : reviews) ptrs.push_back(&r);
  return submission_aggregates(std::span<const corpus::Review* const>(ptrs));
}

PercentileTable percentile_table(std::vector<std::int64_t> values) {
  if (values.empty()) {
    throw UndefinedStatistic("percentiles undefined for an empty population");
  }
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  PercentileTable table;
  for (std::size_t p = 0; p <= 100; ++p) {
    const auto pos = std::min(p * n / 100 + 1, n);
    table[static_cast<int>(p)] = values[pos - 1];
  }
  return table;
}

std::optional<std::int64_t> author_citations(const corpus::Corpus& corpus,
                                             const linkage::Linkage& linkage,
                                             const std::string& author_id,
                                             int year) {
  const auto link = linkage.author_profiles.find(author_id);
  if (link == linkage.author_profiles.end()) return std::nullopt;
  const auto profile = corpus.profiles.find(link->second);
  if (profile == corpus.profiles.end()) return std::nullopt;
  const auto& by_year = profile->second.citations_by_year;
  const auto it = by_year.find(year);
  if (it == by_year.end()) return std::nullopt;
  return it->second;
}

PercentileTable citation_percentile_table(const corpus::Corpus& corpus,
                                          const linkage::Linkage& linkage,
                                          int year) {
  std::set<std::string> population;
  for (const auto& [id, sub] : corpus.submissions) {
    if (sub.year != year) continue;
    population.insert(sub.author_ids.begin(), sub.author_ids.end());
  }
  std::vector<std::int64_t> counts;
  for (const auto& aid : population) {
    if (auto c = author_citations(corpus, linkage, aid, year)) {
      counts.push_back(*c);
    }
  }
  if (counts.empty()) {
    throw UndefinedStatistic("no citation data for year " +
                             std::to_string(year));
  }
  return percentile_table(std::move(counts));
}

AttributeContext make_attribute_context(const corpus::Corpus& corpus,
                                        const linkage::Linkage& linkage,
                                        const TldTable& tlds,
                                        const GenderDictionary& genders,
                                        RankingChoice ranking,
                                        int top_institution_cutoff) {
  AttributeContext ctx;
  ctx.corpus = &corpus;
  ctx.linkage = &linkage;
  ctx.tlds = &tlds;
  ctx.genders = &genders;
  ctx.ranking = ranking;
  ctx.top_institution_cutoff = top_institution_cutoff;
  for (int year : corpus.years()) {
    try {
      ctx.citation_tables[year] =
          citation_percentile_table(corpus, linkage, year);
    } catch (const UndefinedStatistic&) {
      // Year without citation data: flags stay missing.
    }
  }
  return ctx;
}

std::optional<int> institution_rank(const AttributeContext& ctx,
                                    const corpus::Author& author, int year) {
  const auto inst =
      text::case_fold(text::trim(linkage::institution_at(author, year)));
  if (inst.empty()) return std::nullopt;
  if (ctx.ranking == RankingChoice::CSRanking) {
    const auto it = ctx.linkage->institution_matches.find(inst);
    if (it == ctx.linkage->institution_matches.end()) return std::nullopt;
    return it->second.rank;
  }
  const auto table = ctx.linkage->iclr_rankings.find(year);
  if (table == ctx.linkage->iclr_rankings.end()) return std::nullopt;
  const auto it = table->second.find({year, inst});
  if (it == table->second.end()) return std::nullopt;
  return it->second;
}

namespace {

std::optional<bool> strict_majority(std::size_t hits, std::size_t resolved) {
  if (resolved == 0 || 2 * hits == resolved) return std::nullopt;
  return 2 * hits > resolved;
}

}  // namespace

SensitiveAttributes sensitive_attributes(const corpus::Submission& submission,
                                         const AttributeContext& ctx) {
  const auto& corpus = *ctx.corpus;
  SensitiveAttributes out;

  std::size_t resolved = 0;
  std::size_t na = 0;
  std::size_t us = 0;
  std::optional<std::int64_t> best_citations;
  std::optional<int> best_rank;
  for (const auto& aid : submission.author_ids) {
    const auto it = corpus.authors.find(aid);
    if (it == corpus.authors.end()) continue;
    const auto& author = it->second;
    if (auto country = geography_of_author(author, submission.year, *ctx.tlds)) {
      ++resolved;
      if (is_north_america(*country)) ++na;
      if (*country == "US") ++us;
    }
    if (auto c = author_citations(corpus, *ctx.linkage, aid, submission.year)) {
      best_citations = std::max(best_citations.value_or(*c), *c);
    }
    if (auto r = institution_rank(ctx, author, submission.year)) {
      best_rank = std::min(best_rank.value_or(*r), *r);
    }
  }
  out.majority_north_america = strict_majority(na, resolved);
  out.majority_us = strict_majority(us, resolved);

  if (!submission.author_ids.empty()) {
    const auto lead = corpus.authors.find(submission.author_ids.front());
    if (lead != corpus.authors.end()) {
      if (auto score = perceived_gender(lead->second.first_name, *ctx.genders)) {
        if (*score != 0.5) out.leading_author_female = *score < 0.5;
      }
    }
  }

  if (best_citations) {
    const auto table = ctx.citation_tables.find(submission.year);
    if (table != ctx.citation_tables.end()) {
      out.top_percent_author = *best_citations >= table->second.at(99);
    }
  }

  if (best_rank) out.top_institution = *best_rank <= ctx.top_institution_cutoff;
  return out;
}

const std::vector<std::string>& attribute_names() {
  static const std::vector<std::string> names = {
      "majority_north_america", "majority_us", "leading_author_female",
      "top_percent_author", "top_institution"};
  return names;
}

std::optional<bool> attribute_value(const SensitiveAttributes& attrs,
                                    std::string_view name) {
  if (name == "majority_north_america") return attrs.majority_north_america;
  if (name == "majority_us") return attrs.majority_us;
  if (name == "leading_author_female") return attrs.leading_author_female;
  if (name == "top_percent_author") return attrs.top_percent_author;
  if (name == "top_institution") return attrs.top_institution;
  throw InvalidArgument("unknown sensitive attribute '" + std::string(name) +
                        "'");
}

}  // namespace revaudit::features
