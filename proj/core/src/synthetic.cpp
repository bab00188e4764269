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

#include "revaudit/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "revaudit/error.hpp"
#include "revaudit/text.hpp"

namespace revaudit::synthetic {

namespace {

struct Institution {
  const char* name;
  const char* domain;
  // Spelling used in the CSRanking table; nullptr when unranked.
  const char* ranked_as;
  int rank;
};

constexpr std::array<Institution, 10> kNorthAmerica = {{
    {"Stanford University", "stanford.edu", "Stanford University", 2},
    {"Massachusetts Institute of Technology", "mit.edu",
     "Massachusetts Institute of Technology", 1},
    {"Carnegie Mellon University", "cmu.edu", "Carnegie-Mellon University", 3},
    {"University of Toronto", "utoronto.ca", "University of Toronto", 9},
    {"University of California Berkeley", "berkeley.edu",
     "University of California, Berkeley", 4},
    {"University of Washington", "cs.washington.edu",
     "University of Washington", 6},
    {"McGill University", "mcgill.ca", "McGill University", 17},
    {"Cornell University", "cornell.edu", "Cornell University", 8},
    {"Princeton University", "princeton.edu", "Princeton University", 12},
    {"Community College of Vermont", "ccv.edu", nullptr, 0},
}};

constexpr std::array<Institution, 10> kOther = {{
    {"Tsinghua University", "tsinghua.edu.cn", "Tsinghua University", 5},
    {"Peking University", "pku.edu.cn", "Peking University", 7},
    {"ETH Zurich", "inf.ethz.ch", "ETH Zurich", 10},
    {"University of Oxford", "ox.ac.uk", "University of Oxford", 11},
    {"University of Cambridge", "cam.ac.uk", "University of Cambridge", 13},
    {"Technical University of Munich", "tum.de",
     "Technical University of Munich", 14},
    {"Max Planck Institute", "mpg.de", nullptr, 0},
    {"Shanghai Jiao Tong University", "sjtu.edu.cn",
     "Shanghai Jiao Tong University", 15},
    {"Imperial College London", "imperial.ac.uk", "Imperial College London",
     16},
    {"Zhejiang University", "zju.edu.cn", "Zhejiang University", 18},
}};

struct Name {
  const char* first;
  double male_score;
};

// Scores of exactly 0.5 and names absent from the dictionary leave the
// perceived gender undetermined.
constexpr std::array<Name, 16> kFirstNames = {{
    {"Alice", 0.02}, {"Maria", 0.03}, {"Sofia", 0.04}, {"Emma", 0.05},
    {"Mei", 0.10},   {"Priya", 0.08}, {"John", 0.98},  {"David", 0.99},
    {"Michael", 0.99}, {"Hans", 0.97}, {"Wei", 0.60},  {"Kai", 0.50},
    {"Ahmed", 0.96}, {"Lukas", 0.97}, {"Yuki", 0.35},  {"Quinn", -1.0},
}};

constexpr std::array<const char*, 24> kSurnames = {
    "Smith",  "Chen",   "Garcia", "Mueller", "Wang",    "Kumar",
    "Tanaka", "Brown",  "Li",     "Martin",  "Rossi",   "Novak",
    "Silva",  "Kim",    "Nguyen", "Cohen",   "Ivanov",  "Okafor",
    "Larsen", "Dubois", "Zhang",  "Haddad",  "Schmidt", "Moreau"};

constexpr std::array<const char*, 24> kKeywords = {
    "reinforcement learning", "graph neural networks", "transformers",
    "optimization", "generalization", "robustness", "adversarial examples",
    "representation learning", "meta-learning", "federated learning",
    "fairness", "interpretability", "generative models", "diffusion models",
    "self-supervised learning", "contrastive learning", "continual learning",
    "causal inference", "bayesian deep learning", "language models",
    "optimisation", "transformer", "graph neural network", "robustnes"};

struct AuthorSeed {
  std::string id;
  bool north_america = false;
  std::size_t institution = 0;
};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

Dataset generate(const Options& options) {
  if (options.n_submissions == 0) {
    throw InvalidArgument("synthetic corpus needs at least one submission");
  }
  if (options.year_min > options.year_max) {
    throw InvalidArgument("synthetic corpus: year_min exceeds year_max");
  }
  for (const double r : {options.accept_rate_na, options.accept_rate_other}) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw InvalidArgument("acceptance rates must lie in [0, 1]");
    }
  }
  if (options.mirror_groups &&
      (options.accept_rate_na != options.accept_rate_other ||
       options.n_submissions % 2 != 0)) {
    throw InvalidArgument(
        "mirrored groups need equal acceptance rates and an even count");
  }
  if (options.embedding_dim == 0 || options.n_topics <= 0) {
    throw InvalidArgument("embedding_dim and n_topics must be positive");
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  Dataset data;
  auto& corpus = data.corpus;
  corpus.config.year_min = options.year_min;
  corpus.config.year_max = options.year_max;
  corpus.config.embedding_dim = options.embedding_dim;
  for (int y = options.year_min; y <= options.year_max; ++y) {
    corpus.config.review_release[y] = corpus::Date{
        std::chrono::year(y - 1), std::chrono::November, std::chrono::day(10)};
  }
  for (const auto& n : kFirstNames) {
    if (n.male_score >= 0.0) {
      data.gender_scores[text::case_fold(n.first)] = n.male_score;
    }
  }

  // Rankings: one CSRanking table for the latest year.
  for (const auto* table : {&kNorthAmerica, &kOther}) {
    for (const auto& inst : *table) {
      if (inst.ranked_as == nullptr) continue;
      corpus.rankings.push_back(
          corpus::RankingEntry{text::case_fold(inst.ranked_as), inst.rank,
                               corpus::RankingSource::CSRanking,
                               options.year_max});
    }
  }

  // Author pools.
  const std::size_t per_group =
      options.authors_per_group > 0
          ? options.authors_per_group
          : std::max<std::size_t>(20, options.n_submissions / 5);
  std::array<std::vector<AuthorSeed>, 2> pools;
  std::size_t author_counter = 0;
  for (int g = 0; g < 2; ++g) {
    const bool na = g == 0;
    const auto& insts = na ? kNorthAmerica : kOther;
    for (std::size_t i = 0; i < per_group; ++i) {
      AuthorSeed seed;
      seed.id = "a" + std::to_string(author_counter++);
      seed.north_america = na;
      seed.institution = static_cast<std::size_t>(
          uniform_int(0, static_cast<int>(insts.size()) - 1));
      const auto& inst = insts[seed.institution];
      const auto& name =
          kFirstNames[static_cast<std::size_t>(uniform_int(0, kFirstNames.size() - 1))];
      const auto* surname =
          kSurnames[static_cast<std::size_t>(uniform_int(0, kSurnames.size() - 1))];

      corpus::Author a;
      a.id = seed.id;
      a.first_name = name.first;
      a.full_name = std::string(name.first) + " " + surname;
      for (int y = options.year_min; y <= options.year_max; ++y) {
        a.email_domains[y] = inst.domain;
      }
      a.affiliations.push_back(
          corpus::Affiliation{inst.name, options.year_min - 5, options.year_max});
      a.reported_gender = name.male_score < 0.0
                              ? corpus::ReportedGender::Unspecified
                              : (name.male_score < 0.5
                                     ? corpus::ReportedGender::Female
                                     : corpus::ReportedGender::Male);
      a.scholar_id = "s" + a.id;

      corpus::ScholarProfile p;
      p.scholar_id = *a.scholar_id;
      p.name = a.full_name;
      p.institution = inst.name;
      double cites = std::exp(5.0 + 1.5 * normal(rng));
      for (int y = options.year_min; y <= options.year_max; ++y) {
        p.citations_by_year[y] = static_cast<std::int64_t>(std::floor(cites));
        cites *= 1.15;
      }
      p.h_index = static_cast<std::int64_t>(std::sqrt(cites));
      corpus.profiles.emplace(p.scholar_id, std::move(p));
      corpus.authors.emplace(a.id, std::move(a));
      pools[static_cast<std::size_t>(g)].push_back(std::move(seed));
    }
  }

  // Topic centres for the embeddings.
  std::vector<std::vector<double>> topics(static_cast<std::size_t>(options.n_topics));
  for (auto& t : topics) {
    t.resize(options.embedding_dim);
    for (auto& v : t) v = normal(rng);
  }

  struct Draft {
    std::string id;
    int group = 0;
    double quality = 0.0;
  };
  std::vector<Draft> drafts;
  drafts.reserve(options.n_submissions);
  const int n_years = options.year_max - options.year_min + 1;
  std::size_t review_counter = 0;

  auto make_submission = [&](std::size_t index, int group,
                             const corpus::Submission* twin) {
    corpus::Submission s;
    s.id = "p" + std::to_string(index);
    if (twin != nullptr) {
      s = *twin;
      s.id = "p" + std::to_string(index);
    } else {
      s.year = options.year_min + static_cast<int>(index / 2 % static_cast<std::size_t>(n_years));
      const auto topic = static_cast<std::size_t>(uniform_int(0, options.n_topics - 1));
      s.title = "Synthetic study " + std::to_string(index);
      s.abstract = "Topic " + std::to_string(topic);
      const int n_kw = uniform_int(1, 4);
      for (int k = 0; k < n_kw; ++k) {
        s.keywords.push_back(
            kKeywords[static_cast<std::size_t>(uniform_int(0, kKeywords.size() - 1))]);
      }
      s.input_len = uniform_int(15000, 60000);
      s.n_fig = uniform_int(0, 20);
      s.n_ref = uniform_int(10, 80);
      s.n_sec = uniform_int(4, 12);
      s.fluency = clamp01(0.85 + 0.05 * normal(rng));
      corpus::Embedding e(options.embedding_dim);
      for (std::size_t d = 0; d < e.size(); ++d) {
        e[d] = topics[topic][d] + 0.35 * normal(rng);
      }
      s.embedding = std::move(e);
    }
    const auto& pool = pools[static_cast<std::size_t>(group)];
    const int n_auth = twin != nullptr ? static_cast<int>(twin->author_ids.size())
                                       : uniform_int(1, 4);
    s.author_ids.clear();
    while (static_cast<int>(s.author_ids.size()) < n_auth) {
      const auto& cand =
          pool[static_cast<std::size_t>(uniform_int(0, static_cast<int>(pool.size()) - 1))];
      if (std::find(s.author_ids.begin(), s.author_ids.end(), cand.id) ==
          s.author_ids.end()) {
        s.author_ids.push_back(cand.id);
      }
    }
    return s;
  };

  std::map<std::string, std::vector<corpus::Review>> reviews_by_sub;
  for (std::size_t i = 0; i < options.n_submissions; ++i) {
    const bool copy = options.mirror_groups && i % 2 == 1;
    const int group = options.mirror_groups ? static_cast<int>(i % 2)
                                            : (i % 2 == 0 ? 0 : 1);
    Draft d;
    corpus::Submission s;
    if (copy) {
      const auto& twin = corpus.submissions.at(drafts.back().id);
      s = make_submission(i, group, &twin);
      d.quality = drafts.back().quality;
      auto& revs = reviews_by_sub[s.id];
      for (const auto& r : reviews_by_sub.at(twin.id)) {
        auto c = r;
        c.id = "r" + std::to_string(review_counter++);
        c.submission_id = s.id;
        revs.push_back(std::move(c));
      }
    } else {
      s = make_submission(i, group, nullptr);
      d.quality = normal(rng);
      const int n_rev = uniform_int(3, 4);
      auto& revs = reviews_by_sub[s.id];
      for (int k = 0; k < n_rev; ++k) {
        corpus::Review r;
        r.id = "r" + std::to_string(review_counter++);
        r.submission_id = s.id;
        const double target = 5.5 + 1.6 * d.quality +
                              options.rating_noise * normal(rng);
        r.rating = std::clamp(static_cast<int>(std::lround(target)), 1, 10);
        r.confidence = uniform_int(2, 5);
        r.text_len = uniform_int(200, 3000);
        r.sentiment = clamp01(
            1.0 / (1.0 + std::exp(-(0.8 * (r.rating - 5.5) + 0.5 * normal(rng)))));
        revs.push_back(std::move(r));
      }
    }
    d.id = s.id;
    d.group = group;
    data.truth.submissions_per_year[s.year] += 1;
    corpus.submissions.emplace(s.id, std::move(s));
    drafts.push_back(std::move(d));
  }

  // Planted acceptance: the top round(rate * n) latent qualities per group.
  for (int g = 0; g < 2; ++g) {
    std::vector<const Draft*> members;
    for (const auto& d : drafts) {
      if (d.group == g) members.push_back(&d);
    }
    std::stable_sort(members.begin(), members.end(),
                     [](const Draft* a, const Draft* b) {
                       if (a->quality != b->quality) return a->quality > b->quality;
                       return a->id < b->id;
                     });
    const double rate = g == 0 ? options.accept_rate_na : options.accept_rate_other;
    const auto k = static_cast<std::size_t>(
        std::llround(rate * static_cast<double>(members.size())));
    for (std::size_t j = 0; j < members.size(); ++j) {
      auto& s = corpus.submissions.at(members[j]->id);
      if (j < k) {
        const int roll = uniform_int(0, 19);
        s.decision = roll == 0   ? corpus::Decision::Oral
                     : roll < 3 ? corpus::Decision::Spotlight
                                : corpus::Decision::Poster;
      } else {
        s.decision = uniform_int(0, 19) == 0 ? corpus::Decision::WorkshopInvite
                                             : corpus::Decision::Reject;
      }
    }
    if (g == 0) {
      data.truth.n_na = members.size();
      data.truth.accepted_na = k;
    } else {
      data.truth.n_other = members.size();
      data.truth.accepted_other = k;
    }
  }
  if (options.mirror_groups) {
    // Twins share quality; keep their decisions identical.
    for (std::size_t i = 1; i < drafts.size(); i += 2) {
      corpus.submissions.at(drafts[i].id).decision =
          corpus.submissions.at(drafts[i - 1].id).decision;
    }
  }
  if (data.truth.n_na > 0 && data.truth.n_other > 0) {
    const double rate_na = static_cast<double>(data.truth.accepted_na) /
                           static_cast<double>(data.truth.n_na);
    const double rate_other = static_cast<double>(data.truth.accepted_other) /
                              static_cast<double>(data.truth.n_other);
    data.truth.planted_dp = std::max(rate_na, rate_other) -
                            std::min(rate_na, rate_other);
  }

  for (auto& [sub_id, revs] : reviews_by_sub) {
    for (auto& r : revs) {
      data.truth.n_reviews += 1;
      corpus.reviews.emplace(r.id, std::move(r));
    }
  }

  // arXiv candidate pools: a true preprint plus a decoy for a fraction of
  // submissions.
  // Mirrored twins reuse the draw and date offset of their original.
  std::size_t arxiv_counter = 0;
  bool listed = false;
  int offset = 0;
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const bool copy = options.mirror_groups && i % 2 == 1;
    if (!copy) {
      listed = uniform(0.0, 1.0) < options.arxiv_fraction;
      if (listed) offset = uniform_int(-120, 60);
    }
    if (!listed) continue;
    const auto& s = corpus.submissions.at(drafts[i].id);
    const auto release = corpus.config.review_release.at(s.year);
    corpus::ArxivCandidate real;
    real.submission_id = s.id;
    real.arxiv_id = "arx" + std::to_string(arxiv_counter++);
    real.title = s.title;
    for (const auto& aid : s.author_ids) {
      real.authors.insert(corpus.authors.at(aid).full_name);
    }
    real.embedding = *s.embedding;
    for (auto& v : *real.embedding) v += 0.05 * normal(rng);
    real.first_public_date = corpus::Date{
        std::chrono::sys_days(release) + std::chrono::days(offset)};

    corpus::ArxivCandidate decoy;
    decoy.submission_id = s.id;
    decoy.arxiv_id = "arx" + std::to_string(arxiv_counter++);
    decoy.title = "Unrelated preprint";
    decoy.authors.insert("Jordan Placeholder");
    decoy.authors.insert("Robin Example");
    corpus::Embedding e(options.embedding_dim);
    for (auto& v : e) v = normal(rng);
    decoy.embedding = std::move(e);
    decoy.first_public_date = release;
    corpus.arxiv_candidates[s.id] = {std::move(real), std::move(decoy)};
  }

  for (std::size_t w = 0; w < options.n_withdrawn; ++w) {
    const auto id = "w" + std::to_string(w);
    corpus.excluded_submissions.insert(id);
    corpus::Review r;
    r.id = "rw" + std::to_string(w);
    r.submission_id = id;
    r.rating = 3;
    r.confidence = 3;
    data.withdrawn_reviews.push_back(std::move(r));
  }

  corpus.rebuild_index();
  return data;
}

void write_inputs(const Dataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  corpus::Corpus raw = data.corpus;
  for (auto& [id, s] : raw.submissions) {
    s.fluency.reset();
    s.embedding.reset();
  }
  for (auto& [id, r] : raw.reviews) r.sentiment.reset();
  for (const auto& r : data.withdrawn_reviews) raw.reviews.emplace(r.id, r);
  corpus::write_corpus(raw, dir);
  corpus::write_feature_files(data.corpus, dir, "synthetic-generator/1");

  {
    std::ofstream out(dir / "genders.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write genders.csv");
    out << "name,male_score\n";
    for (const auto& [name, score] : data.gender_scores) {
      out << text::csv_escape(name) << ',' << text::format_double(score) << '\n';
    }
  }

  const auto& c = data.corpus.config;
  auto kv = c.to_key_values();
  kv.set("input.submissions", "submissions.jsonl");
  kv.set("input.reviews", "reviews.jsonl");
  kv.set("input.authors", "authors.jsonl");
  kv.set("input.profiles", "profiles.jsonl");
  kv.set("input.rankings", "rankings.csv");
  kv.set("input.arxiv", "arxiv.jsonl");
  kv.set("input.sentiment", "sentiment.jsonl");
  kv.set("input.fluency", "fluency.jsonl");
  kv.set("input.embeddings", "embeddings.jsonl");
  kv.set("input.genders", "genders.csv");
  std::string train;
  for (int y = c.year_min; y < c.year_max; ++y) {
    if (!train.empty()) train += ",";
    train += std::to_string(y);
  }
  kv.set("split.train_years", train);
  kv.set("split.test_years", std::to_string(c.year_max));
  std::ofstream out(dir / "revaudit.cfg", std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write revaudit.cfg");
  out << "# Synthetic corpus run configuration\n" << kv.serialize();
}

}  // namespace revaudit::synthetic
