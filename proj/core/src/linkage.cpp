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

#include "revaudit/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include "revaudit/error.hpp"
#include "revaudit/text.hpp"

namespace revaudit::linkage {

SimilarityScore::SimilarityScore(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvalidArgument("similarity score outside [0,1]: " +
                          text::format_double(value));
  }
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(text::decode_utf8(a), text::decode_utf8(b));
}

std::size_t bounded_levenshtein(std::u32string_view a, std::u32string_view b,
                                std::size_t limit) {
  const auto diff = a.size() > b.size() ? a.size() - b.size()
                                        : b.size() - a.size();
  if (diff > limit) return limit + 1;
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    std::size_t row_min = row[0];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
      row_min = std::min(row_min, row[j]);
    }
    if (row_min > limit) return limit + 1;
  }
  return std::min(row[b.size()], limit + 1);
}

SimilarityScore normalized_levenshtein(std::string_view a,
                                       std::string_view b) {
  const auto fa = text::case_fold(text::decode_utf8(a));
  const auto fb = text::case_fold(text::decode_utf8(b));
  const auto longest = std::max(fa.size(), fb.size());
  if (longest == 0) return SimilarityScore(1.0);
  const auto d = levenshtein(fa, fb);
  return SimilarityScore(1.0 - static_cast<double>(d) /
                                   static_cast<double>(longest));
}

SimilarityScore jaccard(const std::set<std::string>& a,
                        const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return SimilarityScore(1.0);
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  const auto uni = a.size() + b.size() - common;
  return SimilarityScore(static_cast<double>(common) /
                         static_cast<double>(uni));
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw InvalidArgument("cosine similarity: dimension mismatch (" +
                          std::to_string(u.size()) + " vs " +
                          std::to_string(v.size()) + ")");
  }
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) {
    throw InvalidArgument("cosine similarity undefined for a zero vector");
  }
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

namespace {

struct Folded {
  std::u32string chars;

  explicit Folded(std::string_view s)
      : chars(text::case_fold(text::decode_utf8(s))) {}
};

// normalized_levenshtein(a, b) when it is >= floor, otherwise nullopt.
// Uses the bound d <= (1 - floor) * max(|a|, |b|) to cut the edit-distance
// computation short.
std::optional<double> similarity_at_least(const std::u32string& a,
                                          const std::u32string& b,
                                          double floor) {
  const auto longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  const double slack = (1.0 - std::max(floor, 0.0)) * static_cast<double>(longest);
  const auto limit = static_cast<std::size_t>(std::floor(slack + 1e-9));
  const auto d = bounded_levenshtein(a, b, limit);
  if (d > limit) return std::nullopt;
  const double sim =
      1.0 - static_cast<double>(d) / static_cast<double>(longest);
  if (sim < floor) return std::nullopt;
  return sim;
}

}  // namespace

std::optional<corpus::RankingEntry> match_institution(
    std::string_view name, std::span<const corpus::RankingEntry> ranking,
    double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("institution match threshold must lie in (0,1]");
  }
  const Folded query(name);
  const corpus::RankingEntry* best = nullptr;
  double best_sim = threshold;
  for (const auto& entry : ranking) {
    const auto sim = similarity_at_least(query.chars,
                                         Folded(entry.institution).chars,
                                         best_sim);
    if (!sim) continue;
    if (best == nullptr || *sim > best_sim ||
        (*sim == best_sim && entry.rank < best->rank)) {
      best = &entry;
      best_sim = *sim;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

std::set<std::string> author_name_set(std::span<const corpus::Author> authors) {
  std::set<std::string> names;
  for (const auto& a : authors) {
    names.insert(text::case_fold(text::trim(a.full_name)));
  }
  return names;
}

std::string surname_key(const std::set<std::string>& names) {
  std::vector<std::string> surnames;
  for (const auto& name : names) {
    const auto folded = text::case_fold(text::trim(name));
    const auto pos = folded.find_last_of(' ');
    surnames.push_back(pos == std::string::npos ? folded
                                                : folded.substr(pos + 1));
  }
  std::sort(surnames.begin(), surnames.end());
  std::string key;
  for (const auto& s : surnames) {
    if (!key.empty()) key.push_back(' ');
    key += s;
  }
  return key;
}

std::optional<ArxivMatch> match_arxiv(
    const corpus::Submission& submission,
    std::span<const corpus::Author> authors,
    std::span<const corpus::ArxivCandidate> candidates,
    const corpus::Date& review_release, const ArxivMatchOptions& options) {
  const auto sub_names = author_name_set(authors);
  const auto sub_key = surname_key(sub_names);

  std::optional<ArxivMatch> best;
  for (const auto& cand : candidates) {
    std::set<std::string> cand_names;
    for (const auto& n : cand.authors) {
      cand_names.insert(text::case_fold(text::trim(n)));
    }
    ArxivMatch m;
    m.submission_id = submission.id;
    m.arxiv_id = cand.arxiv_id;
    m.author_jaccard = jaccard(sub_names, cand_names);
    m.author_levenshtein =
        normalized_levenshtein(sub_key, surname_key(cand_names));
    if (submission.embedding && cand.embedding) {
      m.embedding_cosine =
          cosine_similarity(*submission.embedding, *cand.embedding);
    }
    const double t = options.threshold;
    const bool jac_ok = m.author_jaccard >= t;
    const bool lev_ok = m.author_levenshtein >= t;
    const bool cos_ok = m.embedding_cosine && *m.embedding_cosine >= t;
    const bool qualifies =
        options.mode == MatchMode::All
            ? jac_ok && lev_ok && (!m.embedding_cosine || cos_ok)
            : jac_ok || lev_ok || cos_ok;
    if (!qualifies) continue;
    m.preprint_before_review = cand.first_public_date < review_release;

    // Highest cosine wins; skipped cosines rank below any present one.
    // Remaining ties go to the higher author scores, then the smaller id.
    const auto key = [](const ArxivMatch& x) {
      return std::make_tuple(x.embedding_cosine.value_or(-2.0),
                             x.author_jaccard.value(),
                             x.author_levenshtein.value());
    };
    if (!best || key(m) > key(*best) ||
        (key(m) == key(*best) && m.arxiv_id < best->arxiv_id)) {
      best = std::move(m);
    }
  }
  return best;
}

std::string institution_at(const corpus::Author& author, int year) {
  const corpus::Affiliation* covering = nullptr;
  for (const auto& aff : author.affiliations) {
    if (aff.start_year <= year && year <= aff.end_year) {
      if (covering == nullptr || aff.start_year > covering->start_year) {
        covering = &aff;
      }
    }
  }
  if (covering != nullptr) return covering->institution;
  return latest_institution(author);
}

std::string latest_institution(const corpus::Author& author) {
  const corpus::Affiliation* latest = nullptr;
  for (const auto& aff : author.affiliations) {
    if (latest == nullptr ||
        std::tie(aff.end_year, aff.start_year) >
            std::tie(latest->end_year, latest->start_year)) {
      latest = &aff;
    }
  }
  return latest == nullptr ? std::string() : latest->institution;
}

namespace {

const corpus::ScholarProfile* best_profile(
    const std::string& query,
    const std::map<std::string, corpus::ScholarProfile>& profiles,
    bool with_institution, double threshold) {
  const Folded folded_query(query);
  const corpus::ScholarProfile* best = nullptr;
  double best_sim = threshold;
  for (const auto& [id, p] : profiles) {
    const Folded candidate(with_institution ? p.name + " " + p.institution
                                            : p.name);
    const auto sim =
        similarity_at_least(folded_query.chars, candidate.chars, best_sim);
    // Strict improvement keeps the smallest scholar id on ties.
    if (sim && (best == nullptr || *sim > best_sim)) {
      best = &p;
      best_sim = *sim;
    }
  }
  return best;
}

}  // namespace

std::optional<corpus::ScholarProfile> match_scholar(
    const corpus::Author& author,
    const std::map<std::string, corpus::ScholarProfile>& profiles,
    double threshold) {
  if (author.scholar_id) {
    const auto it = profiles.find(*author.scholar_id);
    if (it == profiles.end()) {
      throw IntegrityError({"author:" + author.id + " -> scholar:" +
                            *author.scholar_id});
    }
    return it->second;
  }
  const auto name = std::string(text::trim(author.full_name));
  const auto institution = latest_institution(author);
  if (!institution.empty()) {
    if (const auto* p =
            best_profile(name + " " + institution, profiles, true, threshold)) {
      return *p;
    }
  }
  if (const auto* p = best_profile(name, profiles, false, threshold)) {
    return *p;
  }
  return std::nullopt;
}

std::vector<KeywordCluster> cluster_keywords(
    std::span<const std::string> keywords, std::size_t distance_threshold) {
  const std::set<std::string> vocab(keywords.begin(), keywords.end());
  const std::vector<std::string> words(vocab.begin(), vocab.end());
  std::vector<std::u32string> decoded;
  decoded.reserve(words.size());
  for (const auto& w : words) decoded.push_back(text::decode_utf8(w));

  std::vector<std::size_t> parent(words.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&parent](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  // Sorting by length lets the inner loop stop once lengths drift apart.
  std::vector<std::size_t> by_len(words.size());
  std::iota(by_len.begin(), by_len.end(), std::size_t{0});
  std::stable_sort(by_len.begin(), by_len.end(),
                   [&](std::size_t x, std::size_t y) {
                     return decoded[x].size() < decoded[y].size();
                   });
  for (std::size_t i = 0; i < by_len.size(); ++i) {
    const auto a = by_len[i];
    for (std::size_t j = i + 1; j < by_len.size(); ++j) {
      const auto b = by_len[j];
      if (decoded[b].size() - decoded[a].size() > distance_threshold) break;
      const auto ra = find(a);
      const auto rb = find(b);
      if (ra == rb) continue;
      if (bounded_levenshtein(decoded[a], decoded[b], distance_threshold) <=
          distance_threshold) {
        parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }

  std::map<std::size_t, std::set<std::string>> groups;
  for (std::size_t i = 0; i < words.size(); ++i) {
    groups[find(i)].insert(words[i]);
  }
  std::vector<KeywordCluster> clusters;
  for (auto& [root, members] : groups) {
    KeywordCluster c;
    c.representative = *members.begin();
    c.members = std::move(members);
    clusters.push_back(std::move(c));
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const KeywordCluster& x, const KeywordCluster& y) {
              return x.representative < y.representative;
            });
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    clusters[i].cluster_id = static_cast<int>(i);
  }
  return clusters;
}

std::map<std::string, int> competition_ranks(
    const std::map<std::string, std::size_t>& counts) {
  std::vector<std::pair<std::string, std::size_t>> sorted;
  for (const auto& [name, n] : counts) {
    if (n > 0) sorted.emplace_back(name, n);
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& x, const auto& y) {
                     return x.second > y.second;
                   });
  std::map<std::string, int> ranks;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const bool tie = i > 0 && sorted[i].second == sorted[i - 1].second;
    ranks[sorted[i].first] =
        tie ? ranks[sorted[i - 1].first] : static_cast<int>(i + 1);
  }
  return ranks;
}

IclrRankingTable iclr_ranking(const corpus::Corpus& corpus, int target_year) {
  if (!corpus.config.year_in_range(target_year)) {
    throw InvalidArgument("target year " + std::to_string(target_year) +
                          " outside the corpus year range");
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& [id, sub] : corpus.submissions) {
    if (sub.year >= target_year || !sub.accepted()) continue;
    // Each institution is credited once per accepted paper.
    std::set<std::string> institutions;
    for (const auto& aid : sub.author_ids) {
      const auto it = corpus.authors.find(aid);
      if (it == corpus.authors.end()) continue;
      auto inst = text::case_fold(text::trim(institution_at(it->second, sub.year)));
      if (!inst.empty()) institutions.insert(std::move(inst));
    }
    for (const auto& inst : institutions) ++counts[inst];
  }
  IclrRankingTable table;
  for (const auto& [inst, rank] : competition_ranks(counts)) {
    table[{target_year, inst}] = rank;
  }
  return table;
}

namespace {

std::vector<corpus::RankingEntry> latest_csranking(
    const std::vector<corpus::RankingEntry>& rankings) {
  std::optional<int> latest;
  bool any = false;
  for (const auto& e : rankings) {
    if (e.source != corpus::RankingSource::CSRanking) continue;
    any = true;
    if (e.year && (!latest || *e.year > *latest)) latest = e.year;
  }
  std::vector<corpus::RankingEntry> out;
  if (!any) return out;
  for (const auto& e : rankings) {
    if (e.source == corpus::RankingSource::CSRanking && e.year == latest) {
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace

Linkage link_corpus(const corpus::Corpus& corpus, const LinkOptions& options) {
  Linkage out;

  for (const auto& [id, author] : corpus.authors) {
    if (auto p = match_scholar(author, corpus.profiles,
                               options.scholar_threshold)) {
      out.author_profiles[id] = p->scholar_id;
    }
  }

  const auto ranking = latest_csranking(corpus.rankings);
  std::set<std::string> institutions;
  for (const auto& [id, author] : corpus.authors) {
    for (const auto& aff : author.affiliations) {
      auto inst = text::case_fold(text::trim(aff.institution));
      if (!inst.empty()) institutions.insert(std::move(inst));
    }
  }
  out.unique_institutions = institutions.size();
  for (const auto& inst : institutions) {
    if (auto m = match_institution(inst, ranking,
                                   options.institution_threshold)) {
      out.institution_matches.emplace(inst, *m);
    }
  }

  for (const auto& [sub_id, pool] : corpus.arxiv_candidates) {
    const auto sub = corpus.submissions.find(sub_id);
    if (sub == corpus.submissions.end()) continue;
    std::vector<corpus::Author> authors;
    for (const auto& aid : sub->second.author_ids) {
      if (auto a = corpus.authors.find(aid); a != corpus.authors.end()) {
        authors.push_back(a->second);
      }
    }
    corpus::Date release{std::chrono::year(sub->second.year),
                         std::chrono::January, std::chrono::day(1)};
    if (auto r = corpus.config.review_release.find(sub->second.year);
        r != corpus.config.review_release.end()) {
      release = r->second;
    }
    if (auto m = match_arxiv(sub->second, authors, pool, release,
                             options.arxiv)) {
      out.arxiv_matches.emplace(sub_id, std::move(*m));
    }
  }

  std::vector<std::string> keywords;
  for (const auto& [id, sub] : corpus.submissions) {
    keywords.insert(keywords.end(), sub.keywords.begin(), sub.keywords.end());
  }
  out.keyword_clusters = cluster_keywords(keywords, options.keyword_distance);

  for (int year : corpus.years()) {
    out.iclr_rankings[year] = iclr_ranking(corpus, year);
  }
  return out;
}

std::string format_arxiv_matches(const std::map<std::string, ArxivMatch>& m) {
  std::ostringstream os;
  os << "submission_id,arxiv_id,jaccard,levenshtein,cosine,"
        "preprint_before_review\n";
  for (const auto& [id, match] : m) {
    os << text::csv_escape(match.submission_id) << ','
       << text::csv_escape(match.arxiv_id) << ','
       << text::format_double(match.author_jaccard) << ','
       << text::format_double(match.author_levenshtein) << ',';
    if (match.embedding_cosine) {
      os << text::format_double(*match.embedding_cosine);
    }
    os << ',' << (match.preprint_before_review ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string format_linkage_stats(const corpus::Corpus& corpus,
                                 const Linkage& linkage) {
  std::size_t explicit_ids = 0;
  for (const auto& [id, a] : corpus.authors) {
    if (a.scholar_id) ++explicit_ids;
  }
  std::size_t with_pool = 0;
  for (const auto& [id, pool] : corpus.arxiv_candidates) {
    if (!pool.empty()) ++with_pool;
  }
  std::size_t preprints = 0;
  for (const auto& [id, m] : linkage.arxiv_matches) {
    if (m.preprint_before_review) ++preprints;
  }
  std::ostringstream os;
  os << "authors\t" << corpus.authors.size() << '\n'
     << "authors_with_profile\t" << linkage.author_profiles.size() << '\n'
     << "authors_with_reported_profile\t" << explicit_ids << '\n'
     << "unique_institutions\t" << linkage.unique_institutions << '\n'
     << "institutions_matched\t" << linkage.institution_matches.size() << '\n'
     << "submissions_with_arxiv_candidates\t" << with_pool << '\n'
     << "arxiv_matches\t" << linkage.arxiv_matches.size() << '\n'
     << "arxiv_before_review\t" << preprints << '\n'
     << "keyword_clusters\t" << linkage.keyword_clusters.size() << '\n';
  return os.str();
}

}  // namespace revaudit::linkage
