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

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "revaudit/corpus.hpp"
#include "revaudit/error.hpp"
#include "revaudit/text.hpp"

namespace revaudit::corpus {

using nlohmann::json;

namespace {

class WarningSink {
 public:
  explicit WarningSink(std::vector<std::string>& out) : out_(out) {}

  // One warning per (file, field) pair.
  void unknown_field(const std::string& file, std::size_t line,
                     const std::string& field) {
    if (seen_.emplace(file, field).second) {
      out_.push_back(file + ":" + std::to_string(line) +
                     ": ignoring unknown field '" + field + "'");
    }
  }

 private:
  std::vector<std::string>& out_;
  std::set<std::pair<std::string, std::string>> seen_;
};

class Record {
 public:
  Record(const json& obj, std::string file, std::size_t line)
      : obj_(obj), file_(std::move(file)), line_(line) {}

  [[noreturn]] void fail(const std::string& field,
                         const std::string& message) const {
    throw ParseError(file_, line_, field, message);
  }

  const json* find(const std::string& field) const {
    const auto it = obj_.find(field);
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string string(const std::string& field, bool required = true) const {
    const auto* v = find(field);
    if (v == nullptr) {
      if (required) fail(field, "missing required field");
      return {};
    }
    if (!v->is_string()) fail(field, "expected a string");
    return v->get<std::string>();
  }

  std::optional<std::string> optional_string(const std::string& field) const {
    const auto* v = find(field);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) fail(field, "expected a string");
    return v->get<std::string>();
  }

  std::int64_t integer(const std::string& field, bool required = true,
                       std::int64_t fallback = 0) const {
    const auto* v = find(field);
    if (v == nullptr) {
      if (required) fail(field, "missing required field");
      return fallback;
    }
    if (!v->is_number_integer()) fail(field, "expected an integer");
    return v->get<std::int64_t>();
  }

  std::int64_t count(const std::string& field) const {
    const auto v = integer(field, false, 0);
    if (v < 0) fail(field, "must be non-negative");
    return v;
  }

  std::optional<double> optional_real(const std::string& field) const {
    const auto* v = find(field);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) fail(field, "expected a number");
    return v->get<double>();
  }

  std::optional<bool> optional_flag(const std::string& field) const {
    const auto* v = find(field);
    if (v == nullptr) return std::nullopt;
    if (v->is_boolean()) return v->get<bool>();
    if (v->is_number_integer()) {
      const auto i = v->get<std::int64_t>();
      if (i == 0 || i == 1) return i == 1;
    }
    fail(field, "expected a boolean");
  }

  std::vector<std::string> strings(const std::string& field) const {
    std::vector<std::string> out;
    const auto* v = find(field);
    if (v == nullptr) return out;
    if (!v->is_array()) fail(field, "expected an array of strings");
    for (const auto& e : *v) {
      if (!e.is_string()) fail(field, "expected an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  std::optional<Embedding> embedding(const std::string& field) const {
    const auto* v = find(field);
    if (v == nullptr) return std::nullopt;
    return to_embedding(*v, field);
  }

  Embedding to_embedding(const json& v, const std::string& field) const {
    if (!v.is_array()) fail(field, "expected an array of numbers");
    Embedding out;
    out.reserve(v.size());
    for (const auto& e : v) {
      if (!e.is_number()) fail(field, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  int year_key(const std::string& field, const std::string& key) const {
    const auto y = text::parse_int(key);
    if (!y) fail(field, "key '" + key + "' is not a year");
    return static_cast<int>(*y);
  }

  void check_unknown(const std::set<std::string>& known,
                     WarningSink& sink) const {
    for (const auto& [key, value] : obj_.items()) {
      if (known.count(key) == 0) sink.unknown_field(file_, line_, key);
    }
  }

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  const json& obj_;
  std::string file_;
  std::size_t line_;
};

template <typename Fn>
void for_each_record(const std::filesystem::path& path, Fn&& fn) {
  if (path.empty()) return;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const auto file = path.string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(file, line_no, "<record>",
                       std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) {
      throw ParseError(file, line_no, "<record>", "expected a JSON object");
    }
    fn(Record(obj, file, line_no));
  }
}

const std::set<std::string> kSubmissionFields = {
    "id",      "year",       "title",   "abstract", "keywords", "author_ids",
    "decision", "input_len", "n_fig",   "n_ref",    "n_sec",    "fluency",
    "embedding", "arxiv_first"};
const std::set<std::string> kReviewFields = {
    "id", "submission_id", "rating", "confidence", "text_len", "sentiment"};
const std::set<std::string> kAuthorFields = {
    "id",           "first_name",      "full_name", "email_domains",
    "reported_gender", "affiliations", "scholar_id"};
const std::set<std::string> kProfileFields = {
    "scholar_id", "name", "institution", "citations_by_year", "h_index"};
const std::set<std::string> kArxivFields = {
    "submission_id", "arxiv_id", "title", "authors", "embedding",
    "first_public_date"};
const std::set<std::string> kFeatureFields = {"id", "feature", "value",
                                              "model"};

Submission parse_submission(const Record& r, bool& excluded) {
  Submission s;
  s.id = r.string("id");
  s.year = static_cast<int>(r.integer("year"));
  s.title = r.string("title", false);
  s.abstract = r.string("abstract", false);
  s.keywords = r.strings("keywords");
  s.author_ids = r.strings("author_ids");
  const auto decision = r.string("decision");
  excluded = is_excluded_status(decision);
  if (!excluded) {
    const auto d = parse_decision(decision);
    if (!d) r.fail("decision", "unknown decision '" + decision + "'");
    s.decision = *d;
  }
  s.input_len = r.count("input_len");
  s.n_fig = r.count("n_fig");
  s.n_ref = r.count("n_ref");
  s.n_sec = r.count("n_sec");
  s.fluency = r.optional_real("fluency");
  s.embedding = r.embedding("embedding");
  s.arxiv_first = r.optional_flag("arxiv_first");
  return s;
}

Review parse_review(const Record& r) {
  Review rv;
  rv.id = r.string("id");
  rv.submission_id = r.string("submission_id");
  rv.rating = static_cast<int>(r.integer("rating"));
  rv.confidence = static_cast<int>(r.integer("confidence"));
  rv.text_len = r.count("text_len");
  rv.sentiment = r.optional_real("sentiment");
  return rv;
}

Author parse_author(const Record& r) {
  Author a;
  a.id = r.string("id");
  a.first_name = r.string("first_name", false);
  a.full_name = r.string("full_name", false);
  if (const auto* emails = r.find("email_domains")) {
    if (!emails->is_object()) {
      r.fail("email_domains", "expected an object year -> domain");
    }
    for (const auto& [key, value] : emails->items()) {
      if (!value.is_string()) r.fail("email_domains", "expected string domains");
      a.email_domains[r.year_key("email_domains", key)] =
          value.get<std::string>();
    }
  }
  if (const auto g = r.optional_string("reported_gender")) {
    const auto parsed = parse_reported_gender(*g);
    if (!parsed) r.fail("reported_gender", "unknown gender value '" + *g + "'");
    a.reported_gender = *parsed;
  }
  if (const auto* affs = r.find("affiliations")) {
    if (!affs->is_array()) r.fail("affiliations", "expected an array");
    for (const auto& e : *affs) {
      if (!e.is_object() || !e.contains("institution") ||
          !e["institution"].is_string() || !e.contains("start") ||
          !e["start"].is_number_integer() || !e.contains("end") ||
          !e["end"].is_number_integer()) {
        r.fail("affiliations",
               "expected objects {institution: string, start: int, end: int}");
      }
      a.affiliations.push_back(Affiliation{e["institution"].get<std::string>(),
                                           e["start"].get<int>(),
                                           e["end"].get<int>()});
    }
  }
  a.scholar_id = r.optional_string("scholar_id");
  return a;
}

ScholarProfile parse_profile(const Record& r) {
  ScholarProfile p;
  p.scholar_id = r.string("scholar_id");
  p.name = r.string("name", false);
  p.institution = r.string("institution", false);
  if (const auto* cites = r.find("citations_by_year")) {
    if (!cites->is_object()) {
      r.fail("citations_by_year", "expected an object year -> count");
    }
    for (const auto& [key, value] : cites->items()) {
      if (!value.is_number_integer()) {
        r.fail("citations_by_year", "expected integer counts");
      }
      const auto v = value.get<std::int64_t>();
      if (v < 0) r.fail("citations_by_year", "negative citation count");
      p.citations_by_year[r.year_key("citations_by_year", key)] = v;
    }
  }
  p.h_index = r.count("h_index");
  return p;
}

ArxivCandidate parse_arxiv(const Record& r) {
  ArxivCandidate c;
  c.submission_id = r.string("submission_id");
  c.arxiv_id = r.string("arxiv_id");
  c.title = r.string("title", false);
  for (auto& name : r.strings("authors")) c.authors.insert(std::move(name));
  c.embedding = r.embedding("embedding");
  const auto date = r.string("first_public_date");
  const auto parsed = parse_date(date);
  if (!parsed) r.fail("first_public_date", "expected YYYY-MM-DD");
  c.first_public_date = *parsed;
  return c;
}

void read_rankings(const std::filesystem::path& path, Corpus& corpus) {
  if (path.empty()) return;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const auto file = path.string();
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::parse_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      std::vector<std::string> trimmed;
      for (const auto& f : fields) trimmed.emplace_back(text::trim(f));
      const std::vector<std::string> expected = {"institution", "rank",
                                                 "source", "year"};
      if (trimmed != expected) {
        throw ParseError(file, line_no, "<header>",
                         "expected header 'institution,rank,source,year'");
      }
      continue;
    }
    if (fields.size() != 4) {
      throw ParseError(file, line_no, "<record>", "expected 4 columns");
    }
    RankingEntry e;
    e.institution = text::case_fold(text::trim(fields[0]));
    if (e.institution.empty()) {
      throw ParseError(file, line_no, "institution", "empty institution name");
    }
    const auto rank = text::parse_int(fields[1]);
    if (!rank) throw ParseError(file, line_no, "rank", "expected an integer");
    e.rank = static_cast<int>(*rank);
    const auto source = parse_ranking_source(fields[2]);
    if (!source) {
      throw ParseError(file, line_no, "source",
                       "expected CSRanking or ICLR, got '" + fields[2] + "'");
    }
    e.source = *source;
    if (!text::trim(fields[3]).empty()) {
      const auto year = text::parse_int(fields[3]);
      if (!year) throw ParseError(file, line_no, "year", "expected an integer");
      e.year = static_cast<int>(*year);
    }
    corpus.rankings.push_back(std::move(e));
  }
}

void apply_feature_file(const std::filesystem::path& path,
                        std::string_view expected_feature, Corpus& corpus,
                        std::vector<std::string>& dangling,
                        WarningSink& sink) {
  for_each_record(path, [&](const Record& r) {
    r.check_unknown(kFeatureFields, sink);
    const auto id = r.string("id");
    const auto feature = r.string("feature");
    if (feature != expected_feature) {
      r.fail("feature", "expected feature '" + std::string(expected_feature) +
                            "', got '" + feature + "'");
    }
    if (feature == "sentiment") {
      auto it = corpus.reviews.find(id);
      if (it == corpus.reviews.end()) {
        dangling.push_back("review:" + id);
        return;
      }
      it->second.sentiment = r.optional_real("value");
      return;
    }
    auto it = corpus.submissions.find(id);
    if (it == corpus.submissions.end()) {
      if (corpus.excluded_submissions.count(id) == 0) {
        dangling.push_back("submission:" + id);
      }
      return;
    }
    if (feature == "fluency") {
      it->second.fluency = r.optional_real("value");
    } else {
      it->second.embedding = r.embedding("value");
    }
  });
}

}  // namespace

ReadResult read_corpus(const CorpusPaths& paths, const CorpusConfig& config) {
  ReadResult result;
  auto& corpus = result.corpus;
  corpus.config = config;
  WarningSink sink(result.warnings);

  for_each_record(paths.submissions, [&](const Record& r) {
    r.check_unknown(kSubmissionFields, sink);
    bool excluded = false;
    auto s = parse_submission(r, excluded);
    if (excluded) {
      corpus.excluded_submissions.insert(s.id);
      return;
    }
    const auto id = s.id;
    if (!corpus.submissions.emplace(id, std::move(s)).second) {
      r.fail("id", "duplicate submission id " + id);
    }
  });

  for_each_record(paths.reviews, [&](const Record& r) {
    r.check_unknown(kReviewFields, sink);
    auto rv = parse_review(r);
    if (corpus.excluded_submissions.count(rv.submission_id) > 0) return;
    const auto id = rv.id;
    if (!corpus.reviews.emplace(id, std::move(rv)).second) {
      r.fail("id", "duplicate review id " + id);
    }
  });

  for_each_record(paths.authors, [&](const Record& r) {
    r.check_unknown(kAuthorFields, sink);
    auto a = parse_author(r);
    const auto id = a.id;
    if (!corpus.authors.emplace(id, std::move(a)).second) {
      r.fail("id", "duplicate author id " + id);
    }
  });

  for_each_record(paths.profiles, [&](const Record& r) {
    r.check_unknown(kProfileFields, sink);
    auto p = parse_profile(r);
    const auto id = p.scholar_id;
    if (!corpus.profiles.emplace(id, std::move(p)).second) {
      r.fail("scholar_id", "duplicate scholar id " + id);
    }
  });

  read_rankings(paths.rankings, corpus);

  for_each_record(paths.arxiv, [&](const Record& r) {
    r.check_unknown(kArxivFields, sink);
    auto c = parse_arxiv(r);
    if (corpus.excluded_submissions.count(c.submission_id) > 0) return;
    corpus.arxiv_candidates[c.submission_id].push_back(std::move(c));
  });

  std::vector<std::string> dangling;
  apply_feature_file(paths.sentiment, "sentiment", corpus, dangling, sink);
  apply_feature_file(paths.fluency, "fluency", corpus, dangling, sink);
  apply_feature_file(paths.embeddings, "embedding", corpus, dangling, sink);
  if (!dangling.empty()) throw IntegrityError(std::move(dangling));

  corpus.rebuild_index();
  return result;
}

ReadResult load_corpus(const CorpusPaths& paths, const CorpusConfig& config) {
  auto result = read_corpus(paths, config);
  const auto report = validate_corpus(result.corpus);
  if (report.ok()) return result;
  std::vector<std::string> offenders;
  for (const auto& v : report.violations) {
    if (v.kind == ViolationKind::Referential) {
      offenders.push_back(v.entity + " (" + v.message + ")");
    }
  }
  if (!offenders.empty()) throw IntegrityError(std::move(offenders));
  throw Error("corpus failed validation:\n" + report.to_text());
}

namespace {

json embedding_json(const std::optional<Embedding>& e) {
  if (!e) return nullptr;
  return json(*e);
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  return json(*v);
}

void write_lines(const std::filesystem::path& path,
                 const std::vector<json>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& r : records) out << r.dump() << '\n';
}

}  // namespace

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::vector<json> subs;
  for (const auto& [id, s] : corpus.submissions) {
    subs.push_back(json{{"id", s.id},
                        {"year", s.year},
                        {"title", s.title},
                        {"abstract", s.abstract},
                        {"keywords", s.keywords},
                        {"author_ids", s.author_ids},
                        {"decision", std::string(to_string(s.decision))},
                        {"input_len", s.input_len},
                        {"n_fig", s.n_fig},
                        {"n_ref", s.n_ref},
                        {"n_sec", s.n_sec},
                        {"fluency", optional_json(s.fluency)},
                        {"embedding", embedding_json(s.embedding)},
                        {"arxiv_first", optional_json(s.arxiv_first)}});
  }
  // Excluded ids are kept so that the snapshot remembers them.
  for (const auto& id : corpus.excluded_submissions) {
    subs.push_back(json{{"id", id}, {"year", corpus.config.year_min},
                        {"decision", "Withdrawn"}});
  }
  write_lines(dir / "submissions.jsonl", subs);

  std::vector<json> reviews;
  for (const auto& [id, r] : corpus.reviews) {
    reviews.push_back(json{{"id", r.id},
                           {"submission_id", r.submission_id},
                           {"rating", r.rating},
                           {"confidence", r.confidence},
                           {"text_len", r.text_len},
                           {"sentiment", optional_json(r.sentiment)}});
  }
  write_lines(dir / "reviews.jsonl", reviews);

  std::vector<json> authors;
  for (const auto& [id, a] : corpus.authors) {
    json emails = json::object();
    for (const auto& [year, domain] : a.email_domains) {
      emails[std::to_string(year)] = domain;
    }
    json affs = json::array();
    for (const auto& aff : a.affiliations) {
      affs.push_back(json{{"institution", aff.institution},
                          {"start", aff.start_year},
                          {"end", aff.end_year}});
    }
    authors.push_back(
        json{{"id", a.id},
             {"first_name", a.first_name},
             {"full_name", a.full_name},
             {"email_domains", emails},
             {"reported_gender", std::string(to_string(a.reported_gender))},
             {"affiliations", affs},
             {"scholar_id", optional_json(a.scholar_id)}});
  }
  write_lines(dir / "authors.jsonl", authors);

  std::vector<json> profiles;
  for (const auto& [id, p] : corpus.profiles) {
    json cites = json::object();
    for (const auto& [year, count] : p.citations_by_year) {
      cites[std::to_string(year)] = count;
    }
    profiles.push_back(json{{"scholar_id", p.scholar_id},
                            {"name", p.name},
                            {"institution", p.institution},
                            {"citations_by_year", cites},
                            {"h_index", p.h_index}});
  }
  write_lines(dir / "profiles.jsonl", profiles);

  {
    std::ofstream out(dir / "rankings.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write rankings.csv");
    out << "institution,rank,source,year\n";
    for (const auto& e : corpus.rankings) {
      out << text::csv_escape(e.institution) << ',' << e.rank << ','
          << to_string(e.source) << ',';
      if (e.year) out << *e.year;
      out << '\n';
    }
  }

  std::vector<json> arxiv;
  for (const auto& [sub_id, pool] : corpus.arxiv_candidates) {
    for (const auto& c : pool) {
      arxiv.push_back(
          json{{"submission_id", c.submission_id},
               {"arxiv_id", c.arxiv_id},
               {"title", c.title},
               {"authors", std::vector<std::string>(c.authors.begin(),
                                                    c.authors.end())},
               {"embedding", embedding_json(c.embedding)},
               {"first_public_date", format_date(c.first_public_date)}});
    }
  }
  write_lines(dir / "arxiv.jsonl", arxiv);

  std::ofstream cfg(dir / "corpus.cfg", std::ios::binary | std::ios::trunc);
  if (!cfg) throw Error("cannot write corpus.cfg");
  cfg << corpus.config.to_key_values().serialize();
}

void write_feature_files(const Corpus& corpus, const std::filesystem::path& dir,
                         const std::string& model) {
  std::filesystem::create_directories(dir);
  std::vector<json> sentiment;
  for (const auto& [id, r] : corpus.reviews) {
    if (!r.sentiment) continue;
    sentiment.push_back(json{{"id", id}, {"feature", "sentiment"},
                             {"value", *r.sentiment}, {"model", model}});
  }
  write_lines(dir / "sentiment.jsonl", sentiment);
  std::vector<json> fluency;
  std::vector<json> embeddings;
  for (const auto& [id, s] : corpus.submissions) {
    if (s.fluency) {
      fluency.push_back(json{{"id", id}, {"feature", "fluency"},
                             {"value", *s.fluency}, {"model", model}});
    }
    if (s.embedding) {
      embeddings.push_back(json{{"id", id}, {"feature", "embedding"},
                                {"value", *s.embedding}, {"model", model}});
    }
  }
  write_lines(dir / "fluency.jsonl", fluency);
  write_lines(dir / "embeddings.jsonl", embeddings);
}

CorpusPaths snapshot_paths(const std::filesystem::path& dir) {
  CorpusPaths p;
  p.submissions = dir / "submissions.jsonl";
  p.reviews = dir / "reviews.jsonl";
  p.authors = dir / "authors.jsonl";
  p.profiles = dir / "profiles.jsonl";
  p.rankings = dir / "rankings.csv";
  p.arxiv = dir / "arxiv.jsonl";
  return p;
}

ReadResult load_snapshot(const std::filesystem::path& dir) {
  const auto kv = KeyValueConfig::load(dir / "corpus.cfg");
  return load_corpus(snapshot_paths(dir), CorpusConfig::from(kv));
}

}  // namespace revaudit::corpus
