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
#include <fstream>
#include <limits>
#include <sstream>

#include "revaudit/error.hpp"
#include "revaudit/features.hpp"
#include "revaudit/text.hpp"

namespace revaudit::features {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kSubmissionColumns = {
    "input_len", "n_fig",    "n_ref",       "n_sec",
    "fluency",   "n_author", "arxiv_first", "n_keyword"};

const std::vector<std::string> kAuthorColumns = {
    "author_citation_max", "author_citation_avg", "inst_rank_best",
    "inst_rank_avg",       "male_score_avg",      "male_score_lead",
    "geo_majority_na",     "geo_majority_us"};

const std::vector<std::string> kRatingColumns = {
    "rating_avg",     "rating_max",     "rating_min", "confidence_avg",
    "confidence_max", "confidence_min", "n_review"};

const std::vector<std::string> kReviewNlpColumns = {
    "sentiment_avg", "sentiment_max", "sentiment_min",
    "rlen_avg",      "rlen_max",      "rlen_min"};

bool includes_author(FeatureSet s) {
  return s == FeatureSet::PlusAuthor || s == FeatureSet::All;
}
bool includes_rating(FeatureSet s) {
  return s == FeatureSet::PlusRev || s == FeatureSet::PlusRevNlp ||
         s == FeatureSet::All;
}
bool includes_nlp(FeatureSet s) {
  return s == FeatureSet::PlusRevNlp || s == FeatureSet::All;
}

double flag(const std::optional<bool>& v) {
  return v ? (*v ? 1.0 : 0.0) : kMissing;
}

template <typename T>
double value_or_missing(const std::optional<T>& v) {
  return v ? static_cast<double>(*v) : kMissing;
}

}  // namespace

std::string_view to_string(FeatureSet s) {
  switch (s) {
    case FeatureSet::Base: return "base";
    case FeatureSet::PlusAuthor: return "+author";
    case FeatureSet::PlusRev: return "+rev";
    case FeatureSet::PlusRevNlp: return "+revnlp";
    case FeatureSet::All: return "all";
  }
  return "base";
}

std::optional<FeatureSet> parse_feature_set(std::string_view s) {
  const auto folded = text::case_fold(text::trim(s));
  if (folded == "base") return FeatureSet::Base;
  if (folded == "+author" || folded == "plus_author" || folded == "author") {
    return FeatureSet::PlusAuthor;
  }
  if (folded == "+rev" || folded == "plus_rev" || folded == "rev") {
    return FeatureSet::PlusRev;
  }
  if (folded == "+revnlp" || folded == "plus_revnlp" || folded == "revnlp") {
    return FeatureSet::PlusRevNlp;
  }
  if (folded == "all") return FeatureSet::All;
  return std::nullopt;
}

const std::vector<FeatureSet>& all_feature_sets() {
  static const std::vector<FeatureSet> sets = {
      FeatureSet::Base, FeatureSet::PlusAuthor, FeatureSet::PlusRev,
      FeatureSet::PlusRevNlp, FeatureSet::All};
  return sets;
}

std::optional<std::size_t> FeatureMatrix::column_index(
    std::string_view name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return j;
  }
  return std::nullopt;
}

bool is_imputable(std::string_view column) {
  if (column == "fluency" || column == "arxiv_first") return true;
  for (const auto& c : kAuthorColumns) {
    if (c == column) return true;
  }
  return column.rfind("sentiment_", 0) == 0;
}

FeatureMatrix assemble_features(const AssemblyInputs& inputs, FeatureSet set,
                                std::span<const std::string> submission_ids) {
  const auto& corpus = *inputs.corpus;
  const auto& linkage = *inputs.linkage;
  const auto years = corpus.years();
  if (inputs.cluster_labels == nullptr) {
    throw InvalidArgument("cluster labels are required for every feature set");
  }

  FeatureMatrix m;
  m.feature_set = set;
  m.ids.assign(submission_ids.begin(), submission_ids.end());
  m.columns = kSubmissionColumns;
  for (std::size_t y = 1; y < years.size(); ++y) {
    m.columns.push_back("year_" + std::to_string(years[y]));
  }
  for (int k = 0; k < inputs.n_clusters; ++k) {
    m.columns.push_back("cluster_" + std::to_string(k));
  }
  if (includes_author(set)) {
    m.columns.insert(m.columns.end(), kAuthorColumns.begin(),
                     kAuthorColumns.end());
  }
  if (includes_rating(set)) {
    m.columns.insert(m.columns.end(), kRatingColumns.begin(),
                     kRatingColumns.end());
  }
  if (includes_nlp(set)) {
    m.columns.insert(m.columns.end(), kReviewNlpColumns.begin(),
                     kReviewNlpColumns.end());
  }

  const auto n_rows = static_cast<Eigen::Index>(m.ids.size());
  m.values = Eigen::MatrixXd::Zero(n_rows, static_cast<Eigen::Index>(m.columns.size()));

  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const auto& id = m.ids[static_cast<std::size_t>(i)];
    const auto sub_it = corpus.submissions.find(id);
    if (sub_it == corpus.submissions.end()) {
      throw Error("feature assembly: unknown submission " + id);
    }
    const auto& sub = sub_it->second;
    std::vector<double> row;
    row.reserve(m.columns.size());

    std::optional<bool> arxiv_first = sub.arxiv_first;
    if (!arxiv_first) {
      if (auto it = linkage.arxiv_matches.find(id);
          it != linkage.arxiv_matches.end()) {
        arxiv_first = it->second.preprint_before_review;
      } else if (auto pool = corpus.arxiv_candidates.find(id);
                 pool != corpus.arxiv_candidates.end() &&
                 !pool->second.empty()) {
        arxiv_first = false;
      }
    }
    row.push_back(static_cast<double>(sub.input_len));
    row.push_back(static_cast<double>(sub.n_fig));
    row.push_back(static_cast<double>(sub.n_ref));
    row.push_back(static_cast<double>(sub.n_sec));
    row.push_back(value_or_missing(sub.fluency));
    row.push_back(static_cast<double>(sub.author_ids.size()));
    row.push_back(flag(arxiv_first));
    row.push_back(static_cast<double>(sub.keywords.size()));
    for (std::size_t y = 1; y < years.size(); ++y) {
      row.push_back(sub.year == years[y] ? 1.0 : 0.0);
    }
    const auto label = inputs.cluster_labels->find(id);
    if (label == inputs.cluster_labels->end() || label->second < 0 ||
        label->second >= inputs.n_clusters) {
      throw Error("feature assembly: column 'cluster' missing for submission " +
                  id);
    }
    for (int k = 0; k < inputs.n_clusters; ++k) {
      row.push_back(label->second == k ? 1.0 : 0.0);
    }

    if (includes_author(set)) {
      std::optional<double> cite_max;
      double cite_sum = 0.0;
      std::size_t cite_n = 0;
      std::optional<double> rank_best;
      double rank_sum = 0.0;
      std::size_t rank_n = 0;
      double male_sum = 0.0;
      std::size_t male_n = 0;
      std::optional<double> male_lead;
      for (std::size_t a = 0; a < sub.author_ids.size(); ++a) {
        const auto& aid = sub.author_ids[a];
        const auto author = corpus.authors.find(aid);
        if (author == corpus.authors.end()) continue;
        if (auto c = author_citations(corpus, linkage, aid, sub.year)) {
          const auto v = static_cast<double>(*c);
          cite_max = std::max(cite_max.value_or(v), v);
          cite_sum += v;
          ++cite_n;
        }
        if (auto r = institution_rank(*inputs.attributes, author->second,
                                      sub.year)) {
          const auto v = static_cast<double>(*r);
          rank_best = std::min(rank_best.value_or(v), v);
          rank_sum += v;
          ++rank_n;
        }
        if (auto g = perceived_gender(author->second.first_name,
                                      *inputs.attributes->genders)) {
          male_sum += *g;
          ++male_n;
          if (a == 0) male_lead = *g;
        }
      }
      const auto attrs = sensitive_attributes(sub, *inputs.attributes);
      row.push_back(value_or_missing(cite_max));
      row.push_back(cite_n ? cite_sum / static_cast<double>(cite_n) : kMissing);
      row.push_back(value_or_missing(rank_best));
      row.push_back(rank_n ? rank_sum / static_cast<double>(rank_n) : kMissing);
      row.push_back(male_n ? male_sum / static_cast<double>(male_n) : kMissing);
      row.push_back(value_or_missing(male_lead));
      row.push_back(flag(attrs.majority_north_america));
      row.push_back(flag(attrs.majority_us));
    }

    if (includes_rating(set) || includes_nlp(set)) {
      const auto reviews = corpus.reviews_of(id);
      if (reviews.empty()) {
        throw Error("feature assembly: column 'rating_avg' missing for "
                    "submission " + id + " (no reviews)");
      }
      const auto agg = submission_aggregates(
          std::span<const corpus::Review* const>(reviews));
      if (includes_rating(set)) {
        row.push_back(agg.rating.avg);
        row.push_back(agg.rating.max);
        row.push_back(agg.rating.min);
        row.push_back(agg.confidence.avg);
        row.push_back(agg.confidence.max);
        row.push_back(agg.confidence.min);
        row.push_back(agg.n_review);
      }
      if (includes_nlp(set)) {
        row.push_back(agg.sentiment ? agg.sentiment->avg : kMissing);
        row.push_back(agg.sentiment ? agg.sentiment->max : kMissing);
        row.push_back(agg.sentiment ? agg.sentiment->min : kMissing);
        row.push_back(agg.review_length.avg);
        row.push_back(agg.review_length.max);
        row.push_back(agg.review_length.min);
      }
    }

    for (std::size_t j = 0; j < row.size(); ++j) {
      if (std::isnan(row[j]) && !is_imputable(m.columns[j])) {
        throw Error("feature assembly: mandatory column '" + m.columns[j] +
                    "' missing for submission " + id);
      }
      m.values(i, static_cast<Eigen::Index>(j)) = row[j];
    }
  }
  return m;
}

Preprocessor Preprocessor::fit(const FeatureMatrix& train) {
  if (train.values.rows() == 0) {
    throw InvalidArgument("cannot fit preprocessing on an empty matrix");
  }
  Preprocessor p;
  p.input_ = train.columns;
  const auto n = train.values.rows();
  for (Eigen::Index j = 0; j < train.values.cols(); ++j) {
    double sum = 0.0;
    Eigen::Index observed = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = train.values(i, j);
      if (!std::isnan(v)) {
        sum += v;
        ++observed;
      }
    }
    const auto& name = train.columns[static_cast<std::size_t>(j)];
    if (observed < n && !is_imputable(name)) {
      throw Error("preprocessing: mandatory column '" + name +
                  "' has missing values");
    }
    p.impute_.push_back(observed ? sum / static_cast<double>(observed) : 0.0);
    p.indicator_.push_back(observed < n);
    p.output_.push_back(name);
    if (observed < n) p.output_.push_back(name + "_missing");
  }

  // Standardisation statistics over the imputed training matrix.
  p.mean_.assign(p.output_.size(), 0.0);
  p.scale_.assign(p.output_.size(), 1.0);
  const auto raw = p.apply(train);  // identity scaling at this point
  for (Eigen::Index j = 0; j < raw.values.cols(); ++j) {
    const auto col = raw.values.col(j);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().mean();
    p.mean_[static_cast<std::size_t>(j)] = mean;
    p.scale_[static_cast<std::size_t>(j)] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return p;
}

FeatureMatrix Preprocessor::apply(const FeatureMatrix& raw) const {
  if (raw.columns != input_) {
    throw InvalidArgument("preprocessing: column layout differs from training");
  }
  FeatureMatrix out;
  out.feature_set = raw.feature_set;
  out.ids = raw.ids;
  out.columns = output_;
  out.values.resize(raw.values.rows(), static_cast<Eigen::Index>(output_.size()));
  for (Eigen::Index i = 0; i < raw.values.rows(); ++i) {
    std::size_t k = 0;
    for (std::size_t j = 0; j < input_.size(); ++j) {
      const double v = raw.values(i, static_cast<Eigen::Index>(j));
      const bool missing = std::isnan(v);
      out.values(i, static_cast<Eigen::Index>(k)) =
          ((missing ? impute_[j] : v) - mean_[k]) / scale_[k];
      ++k;
      if (indicator_[j]) {
        out.values(i, static_cast<Eigen::Index>(k)) =
            ((missing ? 1.0 : 0.0) - mean_[k]) / scale_[k];
        ++k;
      }
    }
  }
  return out;
}

SplitMatrices build_feature_matrix(const AssemblyInputs& inputs,
                                   FeatureSet set,
                                   std::span<const std::string> train_ids,
                                   std::span<const std::string> test_ids) {
  const auto raw_train = assemble_features(inputs, set, train_ids);
  const auto raw_test = assemble_features(inputs, set, test_ids);
  const auto prep = Preprocessor::fit(raw_train);
  return SplitMatrices{prep.apply(raw_train), prep.apply(raw_test)};
}

std::string to_csv(const FeatureMatrix& m) {
  std::ostringstream os;
  os << "id";
  for (const auto& c : m.columns) os << ',' << text::csv_escape(c);
  os << '\n';
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    os << text::csv_escape(m.ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      os << ',';
      const double v = m.values(i, j);
      if (!std::isnan(v)) os << text::format_double(v);
    }
    os << '\n';
  }
  return os.str();
}

void write_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << to_csv(m);
}

FeatureMatrix read_csv(const std::filesystem::path& path, FeatureSet set) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  FeatureMatrix m;
  m.feature_set = set;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto fields = text::parse_csv_line(line);
    if (line_no == 1) {
      if (fields.empty() || fields.front() != "id") {
        throw ParseError(path.string(), 1, "<header>", "expected 'id' first");
      }
      m.columns.assign(fields.begin() + 1, fields.end());
      continue;
    }
    if (fields.size() != m.columns.size() + 1) {
      throw ParseError(path.string(), line_no, "<record>",
                       "column count differs from header");
    }
    m.ids.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size(); ++j) {
      if (text::trim(fields[j]).empty()) {
        row.push_back(kMissing);
        continue;
      }
      const auto v = text::parse_double(fields[j]);
      if (!v) {
        throw ParseError(path.string(), line_no, m.columns[j - 1],
                         "expected a number");
      }
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  m.values.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(m.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

}  // namespace revaudit::features
