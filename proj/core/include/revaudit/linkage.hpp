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

#ifndef REVAUDIT_LINKAGE_HPP_
#define REVAUDIT_LINKAGE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revaudit/corpus.hpp"

namespace revaudit::linkage {

// A similarity in [0, 1].
class SimilarityScore {
 public:
  constexpr SimilarityScore() = default;
  explicit SimilarityScore(double value);

  constexpr double value() const { return value_; }
  constexpr operator double() const { return value_; }

 private:
  double value_ = 0.0;
};

// Edit distance over code points (insert, delete, substitute; unit costs).
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

// Returns levenshtein(a, b) when it is <= limit, otherwise limit + 1.
std::size_t bounded_levenshtein(std::u32string_view a, std::u32string_view b,
                                std::size_t limit);

// 1 - distance / max(|a|, |b|) on case-folded inputs; 1 for two empty strings.
SimilarityScore normalized_levenshtein(std::string_view a, std::string_view b);

// |a ∩ b| / |a ∪ b|; 1 when both are empty.
SimilarityScore jaccard(const std::set<std::string>& a,
                        const std::set<std::string>& b);

// dot(u, v) / (|u| |v|). Throws InvalidArgument on dimension mismatch or a
// zero vector.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

std::optional<corpus::RankingEntry> match_institution(
    std::string_view name, std::span<const corpus::RankingEntry> ranking,
    double threshold = 0.8);

enum class MatchMode {
  // Every available similarity must reach the threshold.
  All,
  // Any one similarity reaching the threshold suffices (sensitivity runs).
  Any,
};

struct ArxivMatch {
  std::string submission_id;
  std::string arxiv_id;
  SimilarityScore author_jaccard;
  SimilarityScore author_levenshtein;
  // Missing when either side lacks an embedding; the cosine test was skipped.
  std::optional<double> embedding_cosine;
  bool preprint_before_review = false;
};

struct ArxivMatchOptions {
  double threshold = 0.5;
  MatchMode mode = MatchMode::All;
};

// Case-folded full names of the submission's authors, as used for the
// Jaccard comparison against candidate author sets.
std::set<std::string> author_name_set(std::span<const corpus::Author> authors);
// Sorted, case-folded surnames joined by a single space.
std::string surname_key(const std::set<std::string>& names);

std::optional<ArxivMatch> match_arxiv(
    const corpus::Submission& submission,
    std::span<const corpus::Author> authors,
    std::span<const corpus::ArxivCandidate> candidates,
    const corpus::Date& review_release, const ArxivMatchOptions& options = {});

// Institution of an author at a given year: the affiliation covering the
// year, else the most recent affiliation. Empty when none is reported.
std::string institution_at(const corpus::Author& author, int year);
std::string latest_institution(const corpus::Author& author);

std::optional<corpus::ScholarProfile> match_scholar(
    const corpus::Author& author,
    const std::map<std::string, corpus::ScholarProfile>& profiles,
    double threshold = 0.8);

struct KeywordCluster {
  int cluster_id = 0;
  std::set<std::string> members;
  std::string representative;
};

std::vector<KeywordCluster> cluster_keywords(
    std::span<const std::string> keywords, std::size_t distance_threshold = 2);

// (year, case-folded institution) -> rank.
using IclrRankingTable = std::map<std::pair<int, std::string>, int>;

IclrRankingTable iclr_ranking(const corpus::Corpus& corpus, int target_year);

// Assigns 1,1,3-style ranks to counts sorted descending. Zero counts are
// dropped.
std::map<std::string, int> competition_ranks(
    const std::map<std::string, std::size_t>& counts);

struct LinkOptions {
  double institution_threshold = 0.8;
  double scholar_threshold = 0.8;
  ArxivMatchOptions arxiv;
  std::size_t keyword_distance = 2;
};

// Every entity-resolution result the feature stage consumes.
struct Linkage {
  // author id -> scholar id
  std::map<std::string, std::string> author_profiles;
  // case-folded institution name -> matched CSRanking entry
  std::map<std::string, corpus::RankingEntry> institution_matches;
  std::size_t unique_institutions = 0;
  std::map<std::string, ArxivMatch> arxiv_matches;
  std::vector<KeywordCluster> keyword_clusters;
  // target year -> table
  std::map<int, IclrRankingTable> iclr_rankings;
};

Linkage link_corpus(const corpus::Corpus& corpus, const LinkOptions& options);

std::string format_arxiv_matches(const std::map<std::string, ArxivMatch>& m);
std::string format_linkage_stats(const corpus::Corpus& corpus,
                                 const Linkage& linkage);

}  // namespace revaudit::linkage

#endif  // REVAUDIT_LINKAGE_HPP_
