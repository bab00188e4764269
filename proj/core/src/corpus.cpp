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

#include "revaudit/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "revaudit/error.hpp"
#include "revaudit/text.hpp"

namespace revaudit::corpus {

std::optional<Date> parse_date(std::string_view s) {
  s = text::trim(s);
  // YYYY-MM-DD
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  const auto y = text::parse_int(s.substr(0, 4));
  const auto m = text::parse_int(s.substr(5, 2));
  const auto d = text::parse_int(s.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  const Date date{std::chrono::year(static_cast<int>(*y)),
                  std::chrono::month(static_cast<unsigned>(*m)),
                  std::chrono::day(static_cast<unsigned>(*d))};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Oral: return "Oral";
    case Decision::Spotlight: return "Spotlight";
    case Decision::Poster: return "Poster";
    case Decision::Talk: return "Talk";
    case Decision::WorkshopInvite: return "WorkshopInvite";
    case Decision::Reject: return "Reject";
  }
  return "Reject";
}

std::optional<Decision> parse_decision(std::string_view s) {
  const auto folded = text::case_fold(text::trim(s));
  if (folded == "oral") return Decision::Oral;
  if (folded == "spotlight") return Decision::Spotlight;
  if (folded == "poster") return Decision::Poster;
  if (folded == "talk") return Decision::Talk;
  if (folded == "workshopinvite" || folded == "workshop") {
    return Decision::WorkshopInvite;
  }
  if (folded == "reject") return Decision::Reject;
  return std::nullopt;
}

bool is_excluded_status(std::string_view s) {
  const auto folded = text::case_fold(text::trim(s));
  return folded == "withdrawn" || folded == "deskrejected" ||
         folded == "deskreject" || folded == "desk-rejected" ||
         folded == "desk_rejected";
}

std::string_view to_string(ReportedGender g) {
  switch (g) {
    case ReportedGender::Female: return "Female";
    case ReportedGender::Male: return "Male";
    case ReportedGender::NonBinary: return "NonBinary";
    case ReportedGender::Unspecified: return "Unspecified";
  }
  return "Unspecified";
}

std::optional<ReportedGender> parse_reported_gender(std::string_view s) {
  const auto folded = text::case_fold(text::trim(s));
  if (folded == "female") return ReportedGender::Female;
  if (folded == "male") return ReportedGender::Male;
  if (folded == "nonbinary" || folded == "non-binary") {
    return ReportedGender::NonBinary;
  }
  if (folded == "unspecified" || folded.empty()) {
    return ReportedGender::Unspecified;
  }
  return std::nullopt;
}

std::string_view to_string(RankingSource s) {
  return s == RankingSource::CSRanking ? "CSRanking" : "ICLR";
}

std::optional<RankingSource> parse_ranking_source(std::string_view s) {
  const auto folded = text::case_fold(text::trim(s));
  if (folded == "csranking" || folded == "csrankings") {
    return RankingSource::CSRanking;
  }
  if (folded == "iclr") return RankingSource::ICLR;
  return std::nullopt;
}

Bounds CorpusConfig::rating_bounds(int year) const {
  if (auto it = rating_by_year.find(year); it != rating_by_year.end()) {
    return it->second;
  }
  return rating;
}

Bounds CorpusConfig::confidence_bounds(int year) const {
  if (auto it = confidence_by_year.find(year); it != confidence_by_year.end()) {
    return it->second;
  }
  return confidence;
}

namespace {

// Splits "rating_min.2020" into ("rating_min", 2020).
std::optional<std::pair<std::string, int>> split_year_key(
    const std::string& key) {
  const auto dot = key.rfind('.');
  if (dot == std::string::npos) return std::nullopt;
  const auto year = text::parse_int(std::string_view(key).substr(dot + 1));
  if (!year) return std::nullopt;
  return std::make_pair(key.substr(0, dot), static_cast<int>(*year));
}

}  // namespace

CorpusConfig CorpusConfig::from(const KeyValueConfig& kv) {
  CorpusConfig c;
  c.year_min = static_cast<int>(kv.get_int("year_min", c.year_min));
  c.year_max = static_cast<int>(kv.get_int("year_max", c.year_max));
  c.rating.min = static_cast<int>(kv.get_int("rating_min", c.rating.min));
  c.rating.max = static_cast<int>(kv.get_int("rating_max", c.rating.max));
  c.confidence.min =
      static_cast<int>(kv.get_int("confidence_min", c.confidence.min));
  c.confidence.max =
      static_cast<int>(kv.get_int("confidence_max", c.confidence.max));
  const auto dim = kv.get_int("embedding_dim", 768);
  if (dim <= 0) throw InvalidArgument("embedding_dim must be positive");
  c.embedding_dim = static_cast<std::size_t>(dim);
  if (c.year_min > c.year_max) {
    throw InvalidArgument("year_min exceeds year_max");
  }

  for (const auto& [key, value] : kv.entries()) {
    const auto split = split_year_key(key);
    if (!split) continue;
    const auto& [base, year] = *split;
    if (base == "review_release") {
      const auto d = parse_date(value);
      if (!d) {
        throw InvalidArgument("config key '" + key + "' is not a YYYY-MM-DD date");
      }
      c.review_release[year] = *d;
      continue;
    }
    Bounds* target = nullptr;
    bool is_min = false;
    if (base == "rating_min" || base == "rating_max") {
      auto [it, inserted] = c.rating_by_year.try_emplace(year, c.rating);
      target = &it->second;
      is_min = base == "rating_min";
    } else if (base == "confidence_min" || base == "confidence_max") {
      auto [it, inserted] =
          c.confidence_by_year.try_emplace(year, c.confidence);
      target = &it->second;
      is_min = base == "confidence_min";
    }
    if (target == nullptr) continue;
    const auto v = kv.get_int(key, 0);
    (is_min ? target->min : target->max) = static_cast<int>(v);
  }
  return c;
}

KeyValueConfig CorpusConfig::to_key_values() const {
  KeyValueConfig kv;
  kv.set("year_min", std::to_string(year_min));
  kv.set("year_max", std::to_string(year_max));
  kv.set("rating_min", std::to_string(rating.min));
  kv.set("rating_max", std::to_string(rating.max));
  kv.set("confidence_min", std::to_string(confidence.min));
  kv.set("confidence_max", std::to_string(confidence.max));
  kv.set("embedding_dim", std::to_string(embedding_dim));
  for (const auto& [year, b] : rating_by_year) {
    kv.set("rating_min." + std::to_string(year), std::to_string(b.min));
    kv.set("rating_max." + std::to_string(year), std::to_string(b.max));
  }
  for (const auto& [year, b] : confidence_by_year) {
    kv.set("confidence_min." + std::to_string(year), std::to_string(b.min));
    kv.set("confidence_max." + std::to_string(year), std::to_string(b.max));
  }
  for (const auto& [year, d] : review_release) {
    kv.set("review_release." + std::to_string(year), format_date(d));
  }
  return kv;
}

void Corpus::rebuild_index() {
  review_index.clear();
  for (const auto& [id, review] : reviews) {
    review_index[review.submission_id].push_back(id);
  }
}

std::vector<const Review*> Corpus::reviews_of(
    const std::string& submission_id) const {
  std::vector<const Review*> out;
  const auto it = review_index.find(submission_id);
  if (it == review_index.end()) return out;
  out.reserve(it->second.size());
  for (const auto& rid : it->second) {
    if (auto r = reviews.find(rid); r != reviews.end()) {
      out.push_back(&r->second);
    }
  }
  return out;
}

std::size_t Corpus::review_count(const std::string& submission_id) const {
  const auto it = review_index.find(submission_id);
  return it == review_index.end() ? 0 : it->second.size();
}

std::vector<int> Corpus::years() const {
  std::vector<int> out;
  for (int y = config.year_min; y <= config.year_max; ++y) out.push_back(y);
  return out;
}

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Referential: return "referential";
    case ViolationKind::Range: return "range";
    case ViolationKind::Structure: return "structure";
  }
  return "structure";
}

std::size_t ValidationReport::count(ViolationKind k) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(),
                    [k](const Violation& v) { return v.kind == k; }));
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os << "violations: " << violations.size() << '\n';
  for (const auto& v : violations) {
    os << to_string(v.kind) << '\t' << v.entity << '\t' << v.message << '\n';
  }
  return os.str();
}

namespace {

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  const auto& cfg = corpus.config;
  auto add = [&report](ViolationKind kind, std::string entity,
                       std::string message) {
    report.violations.push_back(
        Violation{kind, std::move(entity), std::move(message)});
  };

  for (const auto& [id, sub] : corpus.submissions) {
    const auto entity = "submission:" + id;
    if (sub.author_ids.empty()) {
      add(ViolationKind::Structure, entity, "no authors");
    }
    std::set<std::string> seen;
    for (const auto& aid : sub.author_ids) {
      if (!seen.insert(aid).second) {
        add(ViolationKind::Structure, entity, "duplicate author id " + aid);
      }
      if (corpus.authors.count(aid) == 0) {
        add(ViolationKind::Referential, entity, "unknown author id " + aid);
      }
    }
    if (!cfg.year_in_range(sub.year)) {
      add(ViolationKind::Range, entity,
          "year " + std::to_string(sub.year) + " outside configured range");
    }
    if (sub.fluency && !in_unit_interval(*sub.fluency)) {
      add(ViolationKind::Range, entity, "fluency outside [0,1]");
    }
    if (sub.embedding && sub.embedding->size() != cfg.embedding_dim) {
      add(ViolationKind::Structure, entity,
          "embedding dimension " + std::to_string(sub.embedding->size()) +
              " != " + std::to_string(cfg.embedding_dim));
    }
    if (sub.input_len < 0 || sub.n_fig < 0 || sub.n_ref < 0 || sub.n_sec < 0) {
      add(ViolationKind::Range, entity, "negative count field");
    }
  }

  for (const auto& [id, review] : corpus.reviews) {
    const auto entity = "review:" + id;
    const auto sub = corpus.submissions.find(review.submission_id);
    if (sub == corpus.submissions.end()) {
      if (corpus.excluded_submissions.count(review.submission_id) > 0) {
        add(ViolationKind::Structure, entity,
            "attached to excluded submission " + review.submission_id);
      } else {
        add(ViolationKind::Referential, entity,
            "unknown submission id " + review.submission_id);
      }
      continue;
    }
    const int year = sub->second.year;
    const auto rb = cfg.rating_bounds(year);
    if (!rb.contains(review.rating)) {
      add(ViolationKind::Range, entity,
          "rating " + std::to_string(review.rating) + " outside [" +
              std::to_string(rb.min) + "," + std::to_string(rb.max) +
              "] for " + std::to_string(year));
    }
    const auto cb = cfg.confidence_bounds(year);
    if (!cb.contains(review.confidence)) {
      add(ViolationKind::Range, entity,
          "confidence " + std::to_string(review.confidence) + " outside [" +
              std::to_string(cb.min) + "," + std::to_string(cb.max) +
              "] for " + std::to_string(year));
    }
    if (review.sentiment && !in_unit_interval(*review.sentiment)) {
      add(ViolationKind::Range, entity, "sentiment outside [0,1]");
    }
    if (review.text_len < 0) {
      add(ViolationKind::Range, entity, "negative text_len");
    }
  }

  for (const auto& [id, author] : corpus.authors) {
    const auto entity = "author:" + id;
    for (const auto& [year, domain] : author.email_domains) {
      if (!cfg.year_in_range(year)) {
        add(ViolationKind::Range, entity,
            "email year " + std::to_string(year) + " outside configured range");
      }
    }
    for (const auto& aff : author.affiliations) {
      if (aff.start_year > aff.end_year) {
        add(ViolationKind::Structure, entity,
            "affiliation '" + aff.institution + "' starts after it ends");
      }
    }
  }

  for (const auto& [id, profile] : corpus.profiles) {
    for (const auto& [year, count] : profile.citations_by_year) {
      if (count < 0) {
        add(ViolationKind::Range, "profile:" + id,
            "negative citation count at " + std::to_string(year));
      }
    }
    if (profile.h_index < 0) {
      add(ViolationKind::Range, "profile:" + id, "negative h_index");
    }
  }

  std::set<std::tuple<RankingSource, std::optional<int>, std::string>> ranked;
  for (const auto& entry : corpus.rankings) {
    const auto entity = "ranking:" + std::string(to_string(entry.source)) +
                        ":" + entry.institution;
    if (entry.rank <= 0) {
      add(ViolationKind::Range, entity, "rank must be positive");
    }
    if (!ranked.emplace(entry.source, entry.year, entry.institution).second) {
      add(ViolationKind::Structure, entity,
          "institution ranked twice in one table");
    }
  }

  for (const auto& [sub_id, pool] : corpus.arxiv_candidates) {
    if (corpus.submissions.count(sub_id) == 0) {
      add(ViolationKind::Referential, "arxiv-pool:" + sub_id,
          "unknown submission id " + sub_id);
    }
    for (const auto& cand : pool) {
      const auto entity = "arxiv:" + cand.arxiv_id;
      if (cand.authors.empty()) {
        add(ViolationKind::Structure, entity, "empty author set");
      }
      if (cand.embedding && cand.embedding->size() != cfg.embedding_dim) {
        add(ViolationKind::Structure, entity, "embedding dimension mismatch");
      }
    }
  }
  return report;
}

double reviews_per_submission(const Corpus& corpus) {
  if (corpus.submissions.empty()) {
    throw UndefinedStatistic("reviews per submission undefined: no submissions");
  }
  std::size_t total = 0;
  for (const auto& [id, sub] : corpus.submissions) {
    total += corpus.review_count(id);
  }
  return static_cast<double>(total) /
         static_cast<double>(corpus.submissions.size());
}

std::vector<YearSummary> summarize(const Corpus& corpus) {
  std::map<int, YearSummary> rows;
  std::map<int, std::set<std::string>> authors_by_year;
  for (int y : corpus.years()) rows[y].year = y;
  for (const auto& [id, sub] : corpus.submissions) {
    auto& row = rows[sub.year];
    row.year = sub.year;
    ++row.submissions;
    ++row.decisions[sub.decision];
    row.reviews += corpus.review_count(id);
    for (const auto& aid : sub.author_ids) authors_by_year[sub.year].insert(aid);
  }
  for (const auto& [year, ids] : authors_by_year) {
    auto& row = rows[year];
    row.authors = ids.size();
    for (const auto& aid : ids) {
      if (auto it = corpus.authors.find(aid); it != corpus.authors.end()) {
        ++row.genders[it->second.reported_gender];
      }
    }
  }
  std::vector<YearSummary> out;
  for (auto& [year, row] : rows) out.push_back(std::move(row));
  return out;
}

std::string format_summary(const std::vector<YearSummary>& rows) {
  std::ostringstream os;
  auto line = [&](std::string_view label, auto getter) {
    os << label;
    for (const auto& r : rows) os << '\t' << getter(r);
    os << '\n';
  };
  os << "year";
  for (const auto& r : rows) os << '\t' << r.year;
  os << '\n';
  line("Submission", [](const YearSummary& r) { return r.submissions; });
  for (auto d : {Decision::Oral, Decision::Spotlight, Decision::Poster,
                 Decision::Talk, Decision::WorkshopInvite, Decision::Reject}) {
    line("  " + std::string(to_string(d)), [d](const YearSummary& r) {
      auto it = r.decisions.find(d);
      return it == r.decisions.end() ? std::size_t{0} : it->second;
    });
  }
  line("Author", [](const YearSummary& r) { return r.authors; });
  for (auto g : {ReportedGender::Female, ReportedGender::Male,
                 ReportedGender::NonBinary, ReportedGender::Unspecified}) {
    line("  " + std::string(to_string(g)), [g](const YearSummary& r) {
      auto it = r.genders.find(g);
      return it == r.genders.end() ? std::size_t{0} : it->second;
    });
  }
  line("Review", [](const YearSummary& r) { return r.reviews; });
  return os.str();
}

}  // namespace revaudit::corpus
