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

#include <filesystem>

#include <gtest/gtest.h>

#include "revaudit/corpus.hpp"
#include "revaudit/error.hpp"
#include "support.hpp"

using namespace revaudit::corpus;
namespace fs = std::filesystem;
using revaudit::testing::Gen;
using revaudit::testing::scratch_dir;
using revaudit::testing::spit;

namespace {

Author make_author(const std::string& id) {
  Author a;
  a.id = id;
  a.first_name = "Ada";
  a.full_name = "Ada " + id;
  return a;
}

Submission make_submission(const std::string& id, std::vector<std::string> authors,
                           int year = 2019) {
  Submission s;
  s.id = id;
  s.year = year;
  s.title = "Title " + id;
  s.author_ids = std::move(authors);
  return s;
}

Review make_review(const std::string& id, const std::string& sub, int rating = 5) {
  Review r;
  r.id = id;
  r.submission_id = sub;
  r.rating = rating;
  r.confidence = 3;
  r.text_len = 100;
  return r;
}

// Random valid corpus with at most a handful of entities.
Corpus random_corpus(Gen& gen) {
  Corpus c;
  const int n_authors = gen.integer(1, 5);
  for (int i = 0; i < n_authors; ++i) {
    auto a = make_author("a" + std::to_string(i));
    if (gen.coin()) a.email_domains[gen.integer(2017, 2022)] = "x.edu";
    if (gen.coin()) a.affiliations.push_back({"Inst " + std::to_string(i), 2015, 2020});
    a.reported_gender = static_cast<ReportedGender>(gen.integer(0, 3));
    c.authors[a.id] = a;
  }
  const int n_subs = gen.integer(0, 6);
  for (int i = 0; i < n_subs; ++i) {
    auto s = make_submission("s" + std::to_string(i),
                             {"a" + std::to_string(gen.integer(0, n_authors - 1))},
                             gen.integer(2017, 2022));
    s.decision = static_cast<Decision>(gen.integer(0, 5));
    s.keywords = {gen.word(1, 5)};
    s.input_len = gen.integer(0, 1000);
    if (gen.coin()) s.fluency = gen.real();
    if (gen.coin()) s.arxiv_first = gen.coin();
    c.submissions[s.id] = s;
    const int n_rev = gen.integer(0, 4);
    for (int r = 0; r < n_rev; ++r) {
      auto rv = make_review(s.id + "r" + std::to_string(r), s.id, gen.integer(1, 10));
      if (gen.coin()) rv.sentiment = gen.real();
      c.reviews[rv.id] = rv;
    }
  }
  c.rebuild_index();
  return c;
}

}  // namespace

TEST(Decision, BinaryAcceptFlag) {
  EXPECT_TRUE(is_accept(Decision::Oral));
  EXPECT_TRUE(is_accept(Decision::Spotlight));
  EXPECT_TRUE(is_accept(Decision::Poster));
  EXPECT_TRUE(is_accept(Decision::Talk));
  EXPECT_FALSE(is_accept(Decision::WorkshopInvite));
  EXPECT_FALSE(is_accept(Decision::Reject));
  EXPECT_TRUE(is_excluded_status("Withdrawn"));
  EXPECT_TRUE(is_excluded_status("Desk Rejected") ||
              is_excluded_status("desk-rejected"));
}

TEST(LoadCorpus, EmptyFilesGiveEmptyValidCorpus) {
  const auto dir = scratch_dir("empty");
  for (const auto* f : {"submissions.jsonl", "reviews.jsonl", "authors.jsonl",
                        "profiles.jsonl", "arxiv.jsonl"}) {
    spit(dir / f, "");
  }
  spit(dir / "rankings.csv", "institution,rank,source,year\n");
  CorpusPaths p{dir / "submissions.jsonl", dir / "reviews.jsonl",
                dir / "authors.jsonl",     dir / "profiles.jsonl",
                dir / "rankings.csv",      dir / "arxiv.jsonl"};
  const auto r = load_corpus(p, CorpusConfig{});
  EXPECT_TRUE(r.corpus.submissions.empty());
  EXPECT_TRUE(r.corpus.reviews.empty());
  EXPECT_TRUE(validate_corpus(r.corpus).ok());
  fs::remove_all(dir);
}

TEST(LoadCorpus, OneSubmissionThreeReviews) {
  Corpus c;
  c.authors["a"] = make_author("a");
  c.submissions["s"] = make_submission("s", {"a"});
  for (int i = 0; i < 3; ++i) {
    c.reviews["r" + std::to_string(i)] = make_review("r" + std::to_string(i), "s");
  }
  c.rebuild_index();
  const auto dir = scratch_dir("one_sub");
  write_corpus(c, dir);
  const auto loaded = load_snapshot(dir);
  EXPECT_EQ(loaded.corpus.review_count("s"), 3u);
  fs::remove_all(dir);
}

TEST(LoadCorpus, RoundTripIsIdentityOnRandomCorpora) {
  Gen gen(3);
  const auto dir = scratch_dir("roundtrip");
  for (int i = 0; i < 40; ++i) {
    const auto c = random_corpus(gen);
    ASSERT_TRUE(validate_corpus(c).ok()) << validate_corpus(c).to_text();
    write_corpus(c, dir);
    const auto back = load_snapshot(dir).corpus;
    EXPECT_EQ(back, c) << "iteration " << i;
    EXPECT_TRUE(validate_corpus(back).ok());
  }
  fs::remove_all(dir);
}

TEST(LoadCorpus, MalformedRecordNamesFileLineAndField) {
  const auto dir = scratch_dir("malformed");
  Corpus c;
  c.authors["a"] = make_author("a");
  c.submissions["s"] = make_submission("s", {"a"});
  c.rebuild_index();
  write_corpus(c, dir);
  spit(dir / "reviews.jsonl",
       "{\"id\":\"r1\",\"submission_id\":\"s\",\"rating\":5,\"confidence\":3,"
       "\"text_len\":1}\n"
       "{\"id\":\"r2\",\"submission_id\":\"s\",\"rating\":\"high\","
       "\"confidence\":3,\"text_len\":1}\n");
  try {
    load_snapshot(dir);
    FAIL() << "expected ParseError";
  } catch (const revaudit::ParseError& e) {
    EXPECT_NE(e.file().find("reviews.jsonl"), std::string::npos);
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.field(), "rating");
  }
  fs::remove_all(dir);
}

TEST(LoadCorpus, DanglingIdsRaiseIntegrityErrorListingOffenders) {
  const auto dir = scratch_dir("dangling");
  Corpus c;
  c.authors["a"] = make_author("a");
  c.submissions["s"] = make_submission("s", {"a"});
  c.reviews["r"] = make_review("r", "X");
  c.rebuild_index();
  write_corpus(c, dir);
  try {
    load_snapshot(dir);
    FAIL() << "expected IntegrityError";
  } catch (const revaudit::IntegrityError& e) {
    ASSERT_EQ(e.offenders().size(), 1u);
    EXPECT_NE(e.offenders()[0].find("X"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(LoadCorpus, WithdrawnSubmissionsAndTheirReviewsAreDropped) {
  const auto dir = scratch_dir("withdrawn");
  spit(dir / "authors.jsonl",
       "{\"id\":\"a\",\"first_name\":\"A\",\"full_name\":\"A B\"}\n");
  spit(dir / "submissions.jsonl",
       "{\"id\":\"s1\",\"year\":2019,\"title\":\"t\",\"author_ids\":[\"a\"],"
       "\"decision\":\"Poster\"}\n"
       "{\"id\":\"s2\",\"year\":2019,\"title\":\"t\",\"author_ids\":[\"a\"],"
       "\"decision\":\"Withdrawn\"}\n");
  spit(dir / "reviews.jsonl",
       "{\"id\":\"r1\",\"submission_id\":\"s2\",\"rating\":5,\"confidence\":3,"
       "\"text_len\":1}\n");
  for (const auto* f : {"profiles.jsonl", "arxiv.jsonl"}) spit(dir / f, "");
  spit(dir / "rankings.csv", "institution,rank,source,year\n");
  CorpusPaths p{dir / "submissions.jsonl", dir / "reviews.jsonl",
                dir / "authors.jsonl",     dir / "profiles.jsonl",
                dir / "rankings.csv",      dir / "arxiv.jsonl"};
  const auto r = load_corpus(p, CorpusConfig{});
  EXPECT_EQ(r.corpus.submissions.size(), 1u);
  EXPECT_TRUE(r.corpus.reviews.empty());
  EXPECT_EQ(r.corpus.excluded_submissions.count("s2"), 1u);
  fs::remove_all(dir);
}

TEST(LoadCorpus, UnknownFieldsWarn) {
  const auto dir = scratch_dir("unknown");
  spit(dir / "authors.jsonl",
       "{\"id\":\"a\",\"first_name\":\"A\",\"full_name\":\"A B\",\"homepage\":1}\n");
  for (const auto* f : {"submissions.jsonl", "reviews.jsonl", "profiles.jsonl",
                        "arxiv.jsonl"}) {
    spit(dir / f, "");
  }
  spit(dir / "rankings.csv", "institution,rank,source,year\n");
  CorpusPaths p{dir / "submissions.jsonl", dir / "reviews.jsonl",
                dir / "authors.jsonl",     dir / "profiles.jsonl",
                dir / "rankings.csv",      dir / "arxiv.jsonl"};
  const auto r = load_corpus(p, CorpusConfig{});
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("homepage"), std::string::npos);
  fs::remove_all(dir);
}

TEST(LoadCorpus, FixtureFeatureFilesAttachValues) {
  const auto dir = revaudit::testing::fixture_dir() / "mini";
  const auto kv = revaudit::KeyValueConfig::load(dir / "revaudit.cfg");
  const auto cfg = CorpusConfig::from(kv);
  CorpusPaths p{dir / "submissions.jsonl", dir / "reviews.jsonl",
                dir / "authors.jsonl",     dir / "profiles.jsonl",
                dir / "rankings.csv",      dir / "arxiv.jsonl",
                dir / "sentiment.jsonl",   dir / "fluency.jsonl",
                dir / "embeddings.jsonl"};
  const auto r = load_corpus(p, cfg);
  EXPECT_TRUE(validate_corpus(r.corpus).ok());
  std::size_t with_embedding = 0;
  for (const auto& [id, s] : r.corpus.submissions) {
    if (s.embedding) {
      ++with_embedding;
      EXPECT_EQ(s.embedding->size(), 768u);
    }
    if (s.fluency) {
      EXPECT_GE(*s.fluency, 0.0);
      EXPECT_LE(*s.fluency, 1.0);
    }
  }
  EXPECT_EQ(with_embedding, r.corpus.submissions.size());
  std::size_t with_sentiment = 0;
  for (const auto& [id, rv] : r.corpus.reviews) with_sentiment += rv.sentiment ? 1 : 0;
  EXPECT_GT(with_sentiment, 0u);
}

TEST(LoadCorpus, FeatureFileForUnknownEntityIsDangling) {
  const auto dir = scratch_dir("feature_dangling");
  Corpus c;
  c.authors["a"] = make_author("a");
  c.submissions["s"] = make_submission("s", {"a"});
  c.rebuild_index();
  write_corpus(c, dir);
  spit(dir / "fluency.jsonl",
       "{\"id\":\"nope\",\"feature\":\"fluency\",\"value\":0.5,\"model\":\"m\"}\n");
  auto paths = snapshot_paths(dir);
  paths.fluency = dir / "fluency.jsonl";
  EXPECT_THROW(load_corpus(paths, c.config), revaudit::IntegrityError);
  fs::remove_all(dir);
}

TEST(Validate, ValidTwoEntityCorpus) {
  Corpus c;
  c.authors["a"] = make_author("a");
  c.submissions["s"] = make_submission("s", {"a"});
  c.rebuild_index();
  EXPECT_TRUE(validate_corpus(c).ok());
}

TEST(Validate, ReviewOfUnknownSubmission) {
  Corpus c;
  c.authors["a"] = make_author("a");
  c.submissions["s"] = make_submission("s", {"a"});
  c.reviews["r"] = make_review("r", "X");
  c.rebuild_index();
  const auto rep = validate_corpus(c);
  EXPECT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(rep.count(ViolationKind::Referential), 1u);
}

TEST(Validate, RatingOutOfRange) {
  Corpus c;
  c.authors["a"] = make_author("a");
  c.submissions["s"] = make_submission("s", {"a"});
  c.reviews["r"] = make_review("r", "s", 14);
  c.rebuild_index();
  const auto rep = validate_corpus(c);
  EXPECT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(rep.count(ViolationKind::Range), 1u);
}

TEST(Validate, PerYearRatingBounds) {
  Corpus c;
  c.config.rating_by_year[2019] = Bounds{1, 4};
  c.authors["a"] = make_author("a");
  c.submissions["s"] = make_submission("s", {"a"}, 2019);
  c.reviews["r"] = make_review("r", "s", 5);
  c.rebuild_index();
  EXPECT_EQ(validate_corpus(c).count(ViolationKind::Range), 1u);
}

TEST(Validate, StructuralViolations) {
  Corpus c;
  c.authors["a"] = make_author("a");
  c.submissions["s"] = make_submission("s", {"a", "a"});
  c.submissions["t"] = make_submission("t", {});
  c.authors["a"].affiliations.push_back({"X", 2020, 2019});
  c.rebuild_index();
  EXPECT_EQ(validate_corpus(c).count(ViolationKind::Structure), 3u);
}

TEST(ReviewsPerSubmission, Examples) {
  Corpus c;
  c.authors["a"] = make_author("a");
  c.submissions["s1"] = make_submission("s1", {"a"});
  c.submissions["s2"] = make_submission("s2", {"a"});
  for (int i = 0; i < 3; ++i) c.reviews["x" + std::to_string(i)] = make_review("x" + std::to_string(i), "s1");
  for (int i = 0; i < 4; ++i) c.reviews["y" + std::to_string(i)] = make_review("y" + std::to_string(i), "s2");
  c.rebuild_index();
  EXPECT_DOUBLE_EQ(reviews_per_submission(c), 3.5);

  Corpus one;
  one.authors["a"] = make_author("a");
  for (int i = 0; i < 5; ++i) {
    const auto id = "s" + std::to_string(i);
    one.submissions[id] = make_submission(id, {"a"});
    one.reviews["r" + id] = make_review("r" + id, id);
  }
  one.rebuild_index();
  EXPECT_DOUBLE_EQ(reviews_per_submission(one), 1.0);
}

TEST(ReviewsPerSubmission, EmptyCorpusIsUndefined) {
  EXPECT_THROW(reviews_per_submission(Corpus{}), revaudit::UndefinedStatistic);
}

TEST(ReviewsPerSubmission, MatchesNaiveCountOnRandomCorpora) {
  Gen gen(4);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_corpus(gen);
    if (c.submissions.empty()) continue;
    std::size_t total = 0;
    for (const auto& [rid, r] : c.reviews) {
      total += c.submissions.count(r.submission_id);
    }
    const double expected =
        static_cast<double>(total) / static_cast<double>(c.submissions.size());
    const double got = reviews_per_submission(c);
    EXPECT_EQ(got, expected);
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, static_cast<double>(c.reviews.size()));
  }
}

TEST(Summary, CountsDecisionsPerYear) {
  Corpus c;
  c.authors["a"] = make_author("a");
  auto s1 = make_submission("s1", {"a"}, 2018);
  s1.decision = Decision::Oral;
  auto s2 = make_submission("s2", {"a"}, 2018);
  c.submissions = {{"s1", s1}, {"s2", s2}};
  c.rebuild_index();
  const auto rows = summarize(c);
  const auto it = std::find_if(rows.begin(), rows.end(),
                               [](const YearSummary& r) { return r.year == 2018; });
  ASSERT_NE(it, rows.end());
  EXPECT_EQ(it->submissions, 2u);
  EXPECT_EQ(it->decisions.at(Decision::Oral), 1u);
  EXPECT_EQ(it->decisions.at(Decision::Reject), 1u);
  EXPECT_EQ(it->authors, 1u);
  EXPECT_FALSE(format_summary(rows).empty());
}

TEST(CorpusConfig, YearScopedKeys) {
  const auto kv = revaudit::KeyValueConfig::parse(
      "year_min = 2018\nyear_max = 2020\nrating_max.2019 = 4\n"
      "review_release.2019 = 2018-11-10\n");
  const auto cfg = CorpusConfig::from(kv);
  EXPECT_EQ(cfg.rating_bounds(2019), (Bounds{1, 4}));
  EXPECT_EQ(cfg.rating_bounds(2020), (Bounds{1, 10}));
  EXPECT_EQ(format_date(cfg.review_release.at(2019)), "2018-11-10");
  EXPECT_EQ(CorpusConfig::from(cfg.to_key_values()), cfg);
}
