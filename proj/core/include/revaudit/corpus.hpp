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

#ifndef REVAUDIT_CORPUS_HPP_
#define REVAUDIT_CORPUS_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "revaudit/config.hpp"

namespace revaudit::corpus {

using Date = std::chrono::year_month_day;

std::optional<Date> parse_date(std::string_view s);
std::string format_date(const Date& d);

enum class Decision { Oral, Spotlight, Poster, Talk, WorkshopInvite, Reject };

// Main-conference acceptance. Workshop invitations count as rejections.
constexpr bool is_accept(Decision d) {
  return d == Decision::Oral || d == Decision::Spotlight ||
         d == Decision::Poster || d == Decision::Talk;
}

std::string_view to_string(Decision d);
std::optional<Decision> parse_decision(std::string_view s);
// Desk rejections and withdrawals are dropped at load time.
bool is_excluded_status(std::string_view s);

enum class ReportedGender { Female, Male, NonBinary, Unspecified };

std::string_view to_string(ReportedGender g);
std::optional<ReportedGender> parse_reported_gender(std::string_view s);

enum class RankingSource { CSRanking, ICLR };

std::string_view to_string(RankingSource s);
std::optional<RankingSource> parse_ranking_source(std::string_view s);

using Embedding = std::vector<double>;

struct Submission {
  std::string id;
  int year = 0;
  std::string title;
  std::string abstract;
  std::vector<std::string> keywords;
  // First entry is the leading author.
  std::vector<std::string> author_ids;
  Decision decision = Decision::Reject;
  std::int64_t input_len = 0;
  std::int64_t n_fig = 0;
  std::int64_t n_ref = 0;
  std::int64_t n_sec = 0;
  std::optional<double> fluency;
  std::optional<Embedding> embedding;
  std::optional<bool> arxiv_first;

  bool accepted() const { return is_accept(decision); }
  bool operator==(const Submission&) const = default;
};

struct Review {
  std::string id;
  std::string submission_id;
  int rating = 0;
  int confidence = 0;
  std::int64_t text_len = 0;
  std::optional<double> sentiment;

  bool operator==(const Review&) const = default;
};

struct Affiliation {
  std::string institution;
  int start_year = 0;
  int end_year = 0;

  bool operator==(const Affiliation&) const = default;
};

struct Author {
  std::string id;
  std::string first_name;
  std::string full_name;
  std::map<int, std::string> email_domains;
  ReportedGender reported_gender = ReportedGender::Unspecified;
  std::vector<Affiliation> affiliations;
  std::optional<std::string> scholar_id;

  bool operator==(const Author&) const = default;
};

struct ScholarProfile {
  std::string scholar_id;
  std::string name;
  std::string institution;
  std::map<int, std::int64_t> citations_by_year;
  std::int64_t h_index = 0;

  bool operator==(const ScholarProfile&) const = default;
};

struct RankingEntry {
  // Stored case-folded.
  std::string institution;
  int rank = 0;
  RankingSource source = RankingSource::CSRanking;
  std::optional<int> year;

  bool operator==(const RankingEntry&) const = default;
};

struct ArxivCandidate {
  std::string submission_id;
  std::string arxiv_id;
  std::string title;
  std::set<std::string> authors;
  std::optional<Embedding> embedding;
  Date first_public_date{};

  bool operator==(const ArxivCandidate&) const = default;
};

struct Bounds {
  int min = 0;
  int max = 0;
  bool contains(int v) const { return v >= min && v <= max; }
  bool operator==(const Bounds&) const = default;
};

struct CorpusConfig {
  int year_min = 2017;
  int year_max = 2022;
  Bounds rating{1, 10};
  Bounds confidence{1, 5};
  // Per-year overrides, e.g. `rating_min.2020 = 1`.
  std::map<int, Bounds> rating_by_year;
  std::map<int, Bounds> confidence_by_year;
  std::size_t embedding_dim = 768;
  // Date reviews became public per conference year; `review_release.2019`.
  std::map<int, Date> review_release;

  Bounds rating_bounds(int year) const;
  Bounds confidence_bounds(int year) const;
  bool year_in_range(int year) const {
    return year >= year_min && year <= year_max;
  }

  static CorpusConfig from(const KeyValueConfig& kv);
  // Emits only the keys this struct understands.
  KeyValueConfig to_key_values() const;

  bool operator==(const CorpusConfig&) const = default;
};

// Immutable after construction; safe to share read-only across threads.
struct Corpus {
  CorpusConfig config;
  std::map<std::string, Submission> submissions;
  std::map<std::string, Review> reviews;
  std::map<std::string, Author> authors;
  std::map<std::string, ScholarProfile> profiles;
  std::vector<RankingEntry> rankings;
  // Candidate pools keyed by submission id.
  std::map<std::string, std::vector<ArxivCandidate>> arxiv_candidates;
  std::set<std::string> excluded_submissions;
  // submission id -> review ids, ordered. Rebuilt by rebuild_index().
  std::map<std::string, std::vector<std::string>> review_index;

  void rebuild_index();
  std::vector<const Review*> reviews_of(const std::string& submission_id) const;
  std::size_t review_count(const std::string& submission_id) const;
  std::vector<int> years() const;

  bool operator==(const Corpus&) const = default;
};

enum class ViolationKind { Referential, Range, Structure };

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string entity;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(ViolationKind k) const;
  std::string to_text() const;
};

ValidationReport validate_corpus(const Corpus& corpus);

// Arithmetic mean of review counts over submissions.
double reviews_per_submission(const Corpus& corpus);

struct CorpusPaths {
  std::filesystem::path submissions;
  std::filesystem::path reviews;
  std::filesystem::path authors;
  std::filesystem::path profiles;
  std::filesystem::path rankings;
  std::filesystem::path arxiv;
  // Language-model feature files; empty path means not supplied.
  std::filesystem::path sentiment;
  std::filesystem::path fluency;
  std::filesystem::path embeddings;
};

struct ReadResult {
  Corpus corpus;
  std::vector<std::string> warnings;
};

// Parses every file without validating. Malformed records raise ParseError.
ReadResult read_corpus(const CorpusPaths& paths, const CorpusConfig& config);

// read_corpus followed by validation: dangling ids raise IntegrityError,
// any other violation raises Error carrying the report text.
ReadResult load_corpus(const CorpusPaths& paths, const CorpusConfig& config);

// Writes the canonical file set (submissions.jsonl, reviews.jsonl,
// authors.jsonl, profiles.jsonl, rankings.csv, arxiv.jsonl, corpus.cfg).
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);
CorpusPaths snapshot_paths(const std::filesystem::path& dir);

// Writes sentiment.jsonl, fluency.jsonl and embeddings.jsonl in the
// language-model feature-file format from the values held in `corpus`.
// Records are emitted only for entities carrying the value.
void write_feature_files(const Corpus& corpus, const std::filesystem::path& dir,
                         const std::string& model);
ReadResult load_snapshot(const std::filesystem::path& dir);

struct YearSummary {
  int year = 0;
  std::map<Decision, std::size_t> decisions;
  std::size_t submissions = 0;
  std::size_t authors = 0;
  std::map<ReportedGender, std::size_t> genders;
  std::size_t reviews = 0;
};

// Per-year counts laid out like the dataset summary table.
std::vector<YearSummary> summarize(const Corpus& corpus);
std::string format_summary(const std::vector<YearSummary>& rows);

}  // namespace revaudit::corpus

#endif  // REVAUDIT_CORPUS_HPP_
