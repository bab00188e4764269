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

#ifndef REVAUDIT_FEATURES_HPP_
#define REVAUDIT_FEATURES_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "revaudit/corpus.hpp"
#include "revaudit/linkage.hpp"

namespace revaudit::features {

// ---------------------------------------------------------------------------
// Lookup tables
// ---------------------------------------------------------------------------

// Domain suffix -> ISO 3166 alpha-2 country code, longest-suffix match on
// whole labels ("cs.ox.ac.uk" matches "ac.uk" before "uk").
class TldTable {
 public:
  // Country-code TLDs plus the US-restricted generic suffixes edu/gov/mil.
  static TldTable bundled();
  // `suffix,country` rows; a header row is accepted and skipped.
  static TldTable load(const std::filesystem::path& path);

  // Entries in `overrides` replace or extend this table.
  void merge(const TldTable& overrides);
  void set(std::string suffix, std::string country);

  std::optional<std::string> country_of(std::string_view domain) const;
  std::size_t size() const { return suffixes_.size(); }

 private:
  std::map<std::string, std::string> suffixes_;
};

// Case-folded first name -> "male" score in [0, 1].
class GenderDictionary {
 public:
  // `name,male_score` rows; a header row is accepted and skipped.
  static GenderDictionary load(const std::filesystem::path& path);

  void set(std::string_view name, double male_score);
  std::optional<double> male_score(std::string_view first_name) const;
  std::size_t size() const { return scores_.size(); }

 private:
  std::map<std::string, double> scores_;
};

// ---------------------------------------------------------------------------
// Per-author and per-submission derivations
// ---------------------------------------------------------------------------

// Email domain for the submission year when the author reports an
// affiliation history, otherwise the latest known domain.
std::optional<std::string> email_domain_at(const corpus::Author& author,
                                           int year);
std::optional<std::string> geography_of_author(const corpus::Author& author,
                                               int year, const TldTable& tlds);

std::optional<double> perceived_gender(std::string_view first_name,
                                       const GenderDictionary& dictionary);

struct Triple {
  double avg = 0.0;
  double max = 0.0;
  double min = 0.0;
};

struct SubmissionAggregates {
  Triple rating;
  Triple confidence;
  // Over reviews carrying a sentiment; missing when none does.
  std::optional<Triple> sentiment;
  Triple review_length;
  int n_review = 0;
};

SubmissionAggregates submission_aggregates(
    std::span<const corpus::Review* const> reviews);
SubmissionAggregates submission_aggregates(
    std::span<const corpus::Review> reviews);

bool is_north_america(std::string_view country);

// Nearest-rank boundaries on the upper side: entry p is the smallest value
// x such that more than p% of the population lies at or below x, i.e. the
// sorted value at 1-based position floor(p * n / 100) + 1 (clipped to n).
// A count >= table[99] therefore places an author in the top 1%.
using PercentileTable = std::map<int, std::int64_t>;

PercentileTable percentile_table(std::vector<std::int64_t> values);

// Citation count of an author at a year through their linked profile.
std::optional<std::int64_t> author_citations(const corpus::Corpus& corpus,
                                             const linkage::Linkage& linkage,
                                             const std::string& author_id,
                                             int year);

// Percentiles of citation counts at `year` over authors on that year's
// submissions. Throws UndefinedStatistic without citation data.
PercentileTable citation_percentile_table(const corpus::Corpus& corpus,
                                          const linkage::Linkage& linkage,
                                          int year);

enum class Provenance { Derived, Missing };

inline Provenance provenance(const std::optional<bool>& flag) {
  return flag ? Provenance::Derived : Provenance::Missing;
}

struct SensitiveAttributes {
  std::optional<bool> majority_north_america;
  // Strict majority of resolvable geographies in the US alone.
  std::optional<bool> majority_us;
  std::optional<bool> leading_author_female;
  std::optional<bool> top_percent_author;
  std::optional<bool> top_institution;
};

enum class RankingChoice { CSRanking, ICLR };

struct AttributeContext {
  const corpus::Corpus* corpus = nullptr;
  const linkage::Linkage* linkage = nullptr;
  const TldTable* tlds = nullptr;
  const GenderDictionary* genders = nullptr;
  RankingChoice ranking = RankingChoice::CSRanking;
  int top_institution_cutoff = 10;
  // year -> percentile table; years absent here yield a missing
  // top_percent_author flag.
  std::map<int, PercentileTable> citation_tables;
};

// Builds the context, computing citation tables for every corpus year that
// has citation data.
AttributeContext make_attribute_context(const corpus::Corpus& corpus,
                                        const linkage::Linkage& linkage,
                                        const TldTable& tlds,
                                        const GenderDictionary& genders,
                                        RankingChoice ranking,
                                        int top_institution_cutoff);

// Rank of an author's institution at a year under the chosen ranking.
std::optional<int> institution_rank(const AttributeContext& ctx,
                                    const corpus::Author& author, int year);

SensitiveAttributes sensitive_attributes(const corpus::Submission& submission,
                                         const AttributeContext& ctx);

// Names accepted by attribute_value(): "majority_north_america",
// "majority_us", "leading_author_female", "top_percent_author",
// "top_institution".
const std::vector<std::string>& attribute_names();
std::optional<bool> attribute_value(const SensitiveAttributes& attrs,
                                    std::string_view name);

// ---------------------------------------------------------------------------
// Design matrices
// ---------------------------------------------------------------------------

enum class FeatureSet { Base, PlusAuthor, PlusRev, PlusRevNlp, All };

std::string_view to_string(FeatureSet s);
std::optional<FeatureSet> parse_feature_set(std::string_view s);
const std::vector<FeatureSet>& all_feature_sets();

struct FeatureMatrix {
  FeatureSet feature_set = FeatureSet::Base;
  std::vector<std::string> ids;
  std::vector<std::string> columns;
  // Rows align with ids. NaN marks a missing value before preprocessing.
  Eigen::MatrixXd values;

  std::optional<std::size_t> column_index(std::string_view name) const;
};

// Columns that may be missing and are then imputed. Every other column is
// mandatory and its absence is an assembly error.
bool is_imputable(std::string_view column);

struct AssemblyInputs {
  const corpus::Corpus* corpus = nullptr;
  const linkage::Linkage* linkage = nullptr;
  const AttributeContext* attributes = nullptr;
  // submission id -> cluster label in [0, n_clusters)
  const std::map<std::string, int>* cluster_labels = nullptr;
  int n_clusters = 20;
};

// Raw (unstandardised) matrix for the given submissions. Year indicators
// cover every corpus year except the first.
FeatureMatrix assemble_features(const AssemblyInputs& inputs, FeatureSet set,
                                std::span<const std::string> submission_ids);

// Imputation and standardisation fitted on a training matrix. Imputable
// columns with missing training values get a companion `<name>_missing`
// indicator; missing entries take the training mean. Every column is then
// centred and scaled by its training standard deviation (1 when constant).
class Preprocessor {
 public:
  static Preprocessor fit(const FeatureMatrix& train);

  FeatureMatrix apply(const FeatureMatrix& raw) const;

  const std::vector<std::string>& output_columns() const { return output_; }

 private:
  std::vector<std::string> input_;
  std::vector<std::string> output_;
  std::vector<double> impute_;
  std::vector<bool> indicator_;
  std::vector<double> mean_;
  std::vector<double> scale_;
};

// Assembles train and test matrices and standardises both with statistics
// from the training rows.
struct SplitMatrices {
  FeatureMatrix train;
  FeatureMatrix test;
};

SplitMatrices build_feature_matrix(const AssemblyInputs& inputs,
                                   FeatureSet set,
                                   std::span<const std::string> train_ids,
                                   std::span<const std::string> test_ids);

// `id,<columns...>` with shortest round-trip decimal values.
std::string to_csv(const FeatureMatrix& m);
void write_csv(const FeatureMatrix& m, const std::filesystem::path& path);
FeatureMatrix read_csv(const std::filesystem::path& path, FeatureSet set);

}  // namespace revaudit::features

#endif  // REVAUDIT_FEATURES_HPP_
