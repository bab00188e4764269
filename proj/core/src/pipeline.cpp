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

#include "revaudit/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include <Eigen/Core>
#include <openssl/opensslv.h>

#include "json.hpp"
#include "revaudit/error.hpp"
#include "revaudit/hashing.hpp"
#include "revaudit/text.hpp"

namespace revaudit::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSnapshotStamp = "stamp.txt";

// ---------------------------------------------------------------------------
// Settings
// ---------------------------------------------------------------------------

const std::vector<std::pair<const char*, const char*>>& defaults() {
  static const std::vector<std::pair<const char*, const char*>> d = {
      {"input.submissions", "submissions.jsonl"},
      {"input.reviews", "reviews.jsonl"},
      {"input.authors", "authors.jsonl"},
      {"input.profiles", "profiles.jsonl"},
      {"input.rankings", "rankings.csv"},
      {"input.arxiv", "arxiv.jsonl"},
      {"input.sentiment", ""},
      {"input.fluency", ""},
      {"input.embeddings", ""},
      {"input.genders", ""},
      {"input.tld_overrides", ""},
      {"year_min", "2017"},
      {"year_max", "2022"},
      {"rating_min", "1"},
      {"rating_max", "10"},
      {"confidence_min", "1"},
      {"confidence_max", "5"},
      {"embedding_dim", "768"},
      {"split.train_years", "2017-2021"},
      {"split.test_years", "2022"},
      {"match.institution_threshold", "0.8"},
      {"match.scholar_threshold", "0.8"},
      {"match.arxiv_threshold", "0.5"},
      {"match.arxiv_mode", "all"},
      {"keyword.distance", "2"},
      {"attributes", "majority_north_america,majority_us,leading_author_female,"
                     "top_percent_author,top_institution"},
      {"attributes.ranking", "csranking"},
      {"attributes.top_institution_cutoff", "10"},
      {"seed", "0"},
      {"cluster.k", "20"},
      {"cluster.restarts", "10"},
      {"cluster.max_kmeans_iter", "300"},
      {"cluster.max_exact", "2000"},
      {"fit.l2", "0.01"},
      {"fit.tol", "1e-8"},
      {"fit.max_iter", "200"},
      {"feature_sets", "base,+author,+rev,+revnlp,all"},
      {"table.base", "+rev"},
      {"table.plus_r", "+revnlp"},
      {"fairness.threshold", "0.5"},
      {"fairness.eo_mode", "tpr"},
      {"fairness.z", "1.96"},
      {"calibration.bins", "10"},
      {"out", "revaudit-out"},
      {"cache_dir", ""},
  };
  return d;
}

// Keys that locate outputs and do not change results.
bool is_location_key(const std::string& key) {
  return key == "out" || key == "cache_dir";
}

bool is_year_scoped_key(const std::string& key) {
  static const std::set<std::string> bases = {
      "review_release", "rating_min", "rating_max", "confidence_min",
      "confidence_max"};
  const auto dot = key.rfind('.');
  if (dot == std::string::npos) return false;
  if (!text::parse_int(std::string_view(key).substr(dot + 1))) return false;
  return bases.count(key.substr(0, dot)) > 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& item : text::split(s, ',')) {
    const auto t = text::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::vector<int> parse_years(const std::string& key, const std::string& value) {
  std::set<int> years;
  for (const auto& item : split_list(value)) {
    const auto dash = item.find('-', 1);
    if (dash != std::string::npos) {
      const auto lo = text::parse_int(item.substr(0, dash));
      const auto hi = text::parse_int(item.substr(dash + 1));
      if (!lo || !hi || *lo > *hi) {
        throw InvalidArgument("config key '" + key + "': bad year range '" +
                              item + "'");
      }
      for (auto y = *lo; y <= *hi; ++y) years.insert(static_cast<int>(y));
      continue;
    }
    const auto y = text::parse_int(item);
    if (!y) throw InvalidArgument("config key '" + key + "': bad year '" + item + "'");
    years.insert(static_cast<int>(*y));
  }
  return {years.begin(), years.end()};
}

double unit_interval(const KeyValueConfig& kv, const std::string& key,
                     bool allow_zero) {
  const double v = kv.get_double(key, 0.0);
  if (!((allow_zero ? v >= 0.0 : v > 0.0) && v <= 1.0)) {
    throw InvalidArgument("config key '" + key + "' must lie in " +
                          std::string(allow_zero ? "[0, 1]" : "(0, 1]"));
  }
  return v;
}

long long positive_int(const KeyValueConfig& kv, const std::string& key) {
  const auto v = kv.get_int(key, 0);
  if (v <= 0) throw InvalidArgument("config key '" + key + "' must be positive");
  return v;
}

fs::path resolve(const fs::path& base, const std::string& value) {
  if (value.empty()) return {};
  fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string flag_cell(const std::optional<bool>& v) {
  if (!v) return {};
  return *v ? "true" : "false";
}

template <typename Fn>
auto run_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

// ---------------------------------------------------------------------------
// Plot-data formats shared by the audit and plotdata commands
// ---------------------------------------------------------------------------

std::string roc_csv(const stats::RocCurve& curve) {
  std::ostringstream os;
  os << "threshold,fpr,tpr\n";
  for (const auto& p : curve.points) {
    os << text::format_double(p.threshold) << ',' << text::format_double(p.fpr)
       << ',' << text::format_double(p.tpr) << '\n';
  }
  return os.str();
}

std::string calibration_csv(const stats::CalibrationCurve& curve) {
  std::ostringstream os;
  os << "lower,upper,mean_predicted,positive_rate,n\n";
  for (const auto& b : curve.bins) {
    os << text::format_double(b.lower) << ',' << text::format_double(b.upper)
       << ',' << text::format_double(b.mean_predicted) << ','
       << text::format_double(b.positive_rate) << ',' << b.count << '\n';
  }
  return os.str();
}

std::string cdf_csv(const std::vector<fairness::CdfStep>& steps) {
  std::ostringstream os;
  os << "x,cdf_true,cdf_false\n";
  for (const auto& s : steps) {
    os << text::format_double(s.x) << ',' << text::format_double(s.cdf_a) << ','
       << text::format_double(s.cdf_b) << '\n';
  }
  return os.str();
}

// One row of outcomes.csv.
struct Outcome {
  std::string id;
  int year = 0;
  bool test = false;
  int y = 0;
  std::optional<double> rating_avg;
  std::map<std::string, std::optional<bool>> attributes;
  std::map<std::string, double> predictions;  // feature-set tag -> p
};

struct OutcomeTable {
  std::vector<std::string> attributes;
  std::vector<std::string> tags;
  std::vector<Outcome> rows;
};

std::string outcomes_csv(const OutcomeTable& t) {
  std::ostringstream os;
  os << "id,year,split,y,rating_avg";
  for (const auto& a : t.attributes) os << ',' << a;
  for (const auto& tag : t.tags) os << ",p_" << tag;
  os << '\n';
  for (const auto& r : t.rows) {
    os << text::csv_escape(r.id) << ',' << r.year << ','
       << (r.test ? "test" : "train") << ',' << r.y << ',';
    if (r.rating_avg) os << text::format_double(*r.rating_avg);
    for (const auto& a : t.attributes) os << ',' << flag_cell(r.attributes.at(a));
    for (const auto& tag : t.tags) {
      os << ',';
      if (auto it = r.predictions.find(tag); it != r.predictions.end()) {
        os << text::format_double(it->second);
      }
    }
    os << '\n';
  }
  return os.str();
}

OutcomeTable read_outcomes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + ": empty file");
  const auto header = text::parse_csv_line(line);
  if (header.size() < 5 || header[0] != "id" || header[4] != "rating_avg") {
    throw Error(path.string() + ": unexpected header");
  }
  OutcomeTable t;
  for (std::size_t c = 5; c < header.size(); ++c) {
    if (header[c].rfind("p_", 0) == 0) {
      t.tags.push_back(header[c].substr(2));
    } else {
      t.attributes.push_back(header[c]);
    }
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto f = text::parse_csv_line(line);
    if (f.size() != header.size()) {
      throw ParseError(path.string(), line_no, "<record>", "wrong column count");
    }
    Outcome r;
    r.id = f[0];
    r.year = static_cast<int>(text::parse_int(f[1]).value_or(0));
    r.test = f[2] == "test";
    r.y = f[3] == "1" ? 1 : 0;
    if (!f[4].empty()) r.rating_avg = text::parse_double(f[4]);
    std::size_t c = 5;
    for (const auto& a : t.attributes) {
      const auto& v = f[c++];
      r.attributes[a] = v.empty() ? std::nullopt : std::optional<bool>(v == "true");
    }
    for (const auto& tag : t.tags) {
      const auto& v = f[c++];
      if (v.empty()) continue;
      const auto p = text::parse_double(v);
      if (!p) throw ParseError(path.string(), line_no, "p_" + tag, "bad number");
      r.predictions[tag] = *p;
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

using FileMap = std::map<std::string, std::string>;

void marginal_files(const OutcomeTable& t, double z, FileMap& files) {
  std::vector<double> ratings;
  for (const auto& r : t.rows) {
    if (r.rating_avg) ratings.push_back(*r.rating_avg);
  }
  const auto edges = fairness::attainable_rating_edges(ratings);
  for (const auto& a : t.attributes) {
    std::vector<fairness::RatedOutcome> rows;
    for (const auto& r : t.rows) {
      const auto& v = r.attributes.at(a);
      if (!r.rating_avg || !v) continue;
      rows.push_back({r.id, *r.rating_avg, r.y, *v ? "true" : "false"});
    }
    fairness::MarginalCurve curve;
    curve.attribute = a;
    if (edges.size() >= 2) curve = fairness::marginal_curve(rows, edges, z);
    curve.attribute = a;
    files["marginal_" + a + ".csv"] = fairness::format_marginal_curve(curve);
  }
}

void cdf_files(const OutcomeTable& t, FileMap& files) {
  for (const auto& a : t.attributes) {
    for (const auto& tag : t.tags) {
      std::vector<double> yes;
      std::vector<double> no;
      for (const auto& r : t.rows) {
        const auto& v = r.attributes.at(a);
        const auto p = r.predictions.find(tag);
        if (!r.test || !v || p == r.predictions.end()) continue;
        (*v ? yes : no).push_back(p->second);
      }
      if (yes.empty() || no.empty()) continue;
      files["cdf_" + a + "_" + tag + ".csv"] =
          cdf_csv(fairness::cdf_steps(yes, no));
    }
  }
}

void roc_calibration_files(const OutcomeTable& t, std::size_t bins,
                           bool want_roc, bool want_calibration,
                           FileMap& files) {
  for (const auto& tag : t.tags) {
    std::vector<double> p;
    std::vector<int> y;
    for (const auto& r : t.rows) {
      const auto it = r.predictions.find(tag);
      if (!r.test || it == r.predictions.end()) continue;
      p.push_back(it->second);
      y.push_back(r.y);
    }
    if (want_roc) files["roc_" + tag + ".csv"] = roc_csv(stats::roc_auc(p, y));
    if (want_calibration) {
      files["calibration_" + tag + ".csv"] =
          calibration_csv(stats::calibration_curve(p, y, bins));
    }
  }
}

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

struct Ingested {
  corpus::Corpus corpus;
  corpus::ValidationReport report;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> input_hashes;
  std::string key;
  bool from_cache = false;
};

std::vector<std::pair<std::string, fs::path>> input_files(const RunConfig& c) {
  std::vector<std::pair<std::string, fs::path>> files = {
      {"submissions", c.inputs.submissions}, {"reviews", c.inputs.reviews},
      {"authors", c.inputs.authors},         {"profiles", c.inputs.profiles},
      {"rankings", c.inputs.rankings},       {"arxiv", c.inputs.arxiv},
      {"sentiment", c.inputs.sentiment},     {"fluency", c.inputs.fluency},
      {"embeddings", c.inputs.embeddings},   {"genders", c.genders},
      {"tld_overrides", c.tld_overrides}};
  files.erase(std::remove_if(files.begin(), files.end(),
                             [](const auto& f) { return f.second.empty(); }),
              files.end());
  return files;
}

Ingested ingest(const RunConfig& config, std::ostream& log) {
  Ingested r;
  for (const auto& [name, path] : input_files(config)) {
    r.input_hashes[name] = hashing::sha256_file(path);
  }
  std::string key_material = config.corpus.to_key_values().serialize();
  for (const auto& [name, hash] : r.input_hashes) {
    key_material += name + "=" + hash + "\n";
  }
  r.key = hashing::sha256(key_material);

  const fs::path cached = config.cache_dir.empty()
                              ? fs::path()
                              : config.cache_dir / "snapshot";
  if (!cached.empty() && fs::exists(cached / kSnapshotStamp) &&
      read_text(cached / kSnapshotStamp) == r.key) {
    auto loaded = corpus::load_snapshot(cached);
    r.corpus = std::move(loaded.corpus);
    for (const auto& line : text::split(read_text(cached / "warnings.txt"), '\n')) {
      if (!line.empty()) r.warnings.push_back(line);
    }
    r.from_cache = true;
    log << "ingest: reusing cached snapshot " << r.key.substr(0, 12) << '\n';
    return r;
  }

  auto read = corpus::read_corpus(config.inputs, config.corpus);
  r.corpus = std::move(read.corpus);
  r.warnings = std::move(read.warnings);
  r.report = corpus::validate_corpus(r.corpus);
  if (r.report.ok() && !cached.empty()) {
    fs::remove_all(cached);
    corpus::write_corpus(r.corpus, cached);
    std::string warning_text;
    for (const auto& w : r.warnings) warning_text += w + "\n";
    write_text(cached / "warnings.txt", warning_text);
    write_text(cached / kSnapshotStamp, r.key);
  }
  return r;
}

std::string summary_text(const corpus::Corpus& c) {
  std::ostringstream os;
  os << corpus::format_summary(corpus::summarize(c));
  os << "submissions\t" << c.submissions.size() << '\n';
  os << "reviews\t" << c.reviews.size() << '\n';
  os << "excluded_submissions\t" << c.excluded_submissions.size() << '\n';
  os << "reviews_per_submission\t";
  try {
    os << text::format_double(corpus::reviews_per_submission(c));
  } catch (const UndefinedStatistic&) {
    os << "n/a";
  }
  os << '\n';
  return os.str();
}

stats::ClusterAssignment cluster(const RunConfig& config,
                                 const corpus::Corpus& c,
                                 const std::string& snapshot_key,
                                 std::ostream& log) {
  std::map<std::string, std::vector<double>> embeddings;
  for (const auto& [id, s] : c.submissions) {
    if (!s.embedding) throw Error("submission " + id + " has no embedding");
    embeddings.emplace(id, *s.embedding);
  }
  const auto& o = config.clustering;
  const auto key = hashing::sha256(
      snapshot_key + "|k=" + std::to_string(o.k) + "|seed=" +
      std::to_string(o.seed) + "|restarts=" + std::to_string(o.restarts) +
      "|iter=" + std::to_string(o.max_kmeans_iter) +
      "|exact=" + std::to_string(o.max_exact));
  const fs::path dir =
      config.cache_dir.empty() ? fs::path() : config.cache_dir / "clusters";
  if (!dir.empty() && fs::exists(dir / kSnapshotStamp) &&
      read_text(dir / kSnapshotStamp) == key) {
    stats::ClusterAssignment a;
    a.k = o.k;
    std::istringstream is(read_text(dir / "clusters.csv"));
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
      const auto f = text::parse_csv_line(line);
      if (f.size() != 2) throw Error("corrupt cluster cache");
      a.labels[f[0]] = static_cast<int>(text::parse_int(f[1]).value_or(-1));
    }
    bool complete = a.labels.size() == embeddings.size();
    for (const auto& [id, e] : embeddings) complete = complete && a.labels.count(id);
    if (complete) {
      log << "cluster: reusing cached assignment " << key.substr(0, 12) << '\n';
      return a;
    }
  }
  auto a = stats::spectral_cluster(embeddings, o);
  if (!dir.empty()) {
    std::ostringstream os;
    os << "id,cluster\n";
    for (const auto& [id, label] : a.labels) {
      os << text::csv_escape(id) << ',' << label << '\n';
    }
    write_text(dir / "clusters.csv", os.str());
    write_text(dir / kSnapshotStamp, key);
  }
  return a;
}

features::TldTable tld_table(const RunConfig& config) {
  auto t = features::TldTable::bundled();
  if (!config.tld_overrides.empty()) {
    t.merge(features::TldTable::load(config.tld_overrides));
  }
  return t;
}

features::GenderDictionary gender_dictionary(const RunConfig& config) {
  if (config.genders.empty()) return {};
  return features::GenderDictionary::load(config.genders);
}

void split_ids(const RunConfig& config, const corpus::Corpus& c,
               std::vector<std::string>& train, std::vector<std::string>& test) {
  const std::set<int> tr(config.train_years.begin(), config.train_years.end());
  const std::set<int> te(config.test_years.begin(), config.test_years.end());
  for (const auto& [id, s] : c.submissions) {
    if (tr.count(s.year)) train.push_back(id);
    if (te.count(s.year)) test.push_back(id);
  }
  if (train.empty()) throw Error("no submissions in the training years");
  if (test.empty()) throw Error("no submissions in the test years");
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& log) {
  for (const auto& w : warnings) log << "warning: " << w << '\n';
}

fs::path partial_path(const fs::path& out) {
  auto normal = out.lexically_normal();
  if (normal.filename().empty()) normal = normal.parent_path();
  return normal.parent_path() / (normal.filename().string() + ".partial");
}

// Linkage outputs shared by link and audit.
void linkage_files(const corpus::Corpus& c, const linkage::Linkage& l,
                   FileMap& files) {
  files["linkage_stats.txt"] = linkage::format_linkage_stats(c, l);
  files["arxiv_matches.csv"] = linkage::format_arxiv_matches(l.arxiv_matches);
  std::ostringstream profiles;
  profiles << "author_id,scholar_id\n";
  for (const auto& [a, s] : l.author_profiles) {
    profiles << text::csv_escape(a) << ',' << text::csv_escape(s) << '\n';
  }
  files["author_profiles.csv"] = profiles.str();
  std::ostringstream inst;
  inst << "institution,matched,rank\n";
  for (const auto& [name, e] : l.institution_matches) {
    inst << text::csv_escape(name) << ',' << text::csv_escape(e.institution)
         << ',' << e.rank << '\n';
  }
  files["institution_matches.csv"] = inst.str();
  std::ostringstream kw;
  kw << "cluster_id,representative,members\n";
  for (const auto& k : l.keyword_clusters) {
    std::string members;
    for (const auto& m : k.members) {
      if (!members.empty()) members += ';';
      members += m;
    }
    kw << k.cluster_id << ',' << text::csv_escape(k.representative) << ','
       << text::csv_escape(members) << '\n';
  }
  files["keyword_clusters.csv"] = kw.str();
}

void write_files(const fs::path& dir, const FileMap& files) {
  for (const auto& [name, content] : files) write_text(dir / name, content);
}

Ingested ingest_or_fail(const RunConfig& config, std::ostream& log) {
  auto in = ingest(config, log);
  if (!in.report.ok()) {
    throw Error("corpus failed validation (" +
                std::to_string(in.report.violations.size()) +
                " violations):\n" + in.report.to_text());
  }
  return in;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

KeyValueConfig default_settings() {
  KeyValueConfig kv;
  for (const auto& [k, v] : defaults()) kv.set(k, v);
  return kv;
}

RunConfig RunConfig::from(const KeyValueConfig& kv, const fs::path& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;

  std::set<std::string> known;
  for (const auto& [k, v] : defaults()) known.insert(k);
  for (const auto& [k, v] : kv.entries()) {
    if (known.count(k) || is_year_scoped_key(k)) c.resolved.set(k, v);
  }
  for (const auto& [k, v] : defaults()) {
    if (!c.resolved.contains(k)) c.resolved.set(k, v);
  }
  const auto& r = c.resolved;
  auto path = [&](const char* key) { return resolve(base_dir, r.get_or(key, "")); };

  c.inputs.submissions = path("input.submissions");
  c.inputs.reviews = path("input.reviews");
  c.inputs.authors = path("input.authors");
  c.inputs.profiles = path("input.profiles");
  c.inputs.rankings = path("input.rankings");
  c.inputs.arxiv = path("input.arxiv");
  c.inputs.sentiment = path("input.sentiment");
  c.inputs.fluency = path("input.fluency");
  c.inputs.embeddings = path("input.embeddings");
  c.genders = path("input.genders");
  c.tld_overrides = path("input.tld_overrides");
  c.corpus = corpus::CorpusConfig::from(r);

  c.train_years = parse_years("split.train_years", r.get_or("split.train_years", ""));
  c.test_years = parse_years("split.test_years", r.get_or("split.test_years", ""));
  if (c.train_years.empty() || c.test_years.empty()) {
    throw InvalidArgument("train and test years must both be non-empty");
  }
  for (int y : c.test_years) {
    if (std::binary_search(c.train_years.begin(), c.train_years.end(), y)) {
      throw InvalidArgument("year " + std::to_string(y) +
                            " is in both the train and test split");
    }
  }

  c.link.institution_threshold = unit_interval(r, "match.institution_threshold", false);
  c.link.scholar_threshold = unit_interval(r, "match.scholar_threshold", false);
  c.link.arxiv.threshold = unit_interval(r, "match.arxiv_threshold", false);
  const auto mode = r.get_or("match.arxiv_mode", "all");
  if (mode == "all") {
    c.link.arxiv.mode = linkage::MatchMode::All;
  } else if (mode == "any") {
    c.link.arxiv.mode = linkage::MatchMode::Any;
  } else {
    throw InvalidArgument("match.arxiv_mode must be 'all' or 'any'");
  }
  const auto kd = r.get_int("keyword.distance", 2);
  if (kd < 0) throw InvalidArgument("keyword.distance must be non-negative");
  c.link.keyword_distance = static_cast<std::size_t>(kd);

  const auto ranking = r.get_or("attributes.ranking", "csranking");
  if (ranking == "csranking") {
    c.ranking = features::RankingChoice::CSRanking;
  } else if (ranking == "iclr") {
    c.ranking = features::RankingChoice::ICLR;
  } else {
    throw InvalidArgument("attributes.ranking must be 'csranking' or 'iclr'");
  }
  c.top_institution_cutoff =
      static_cast<int>(positive_int(r, "attributes.top_institution_cutoff"));
  c.attributes = split_list(r.get_or("attributes", ""));
  for (const auto& a : c.attributes) {
    const auto& names = features::attribute_names();
    if (std::find(names.begin(), names.end(), a) == names.end()) {
      throw InvalidArgument("unknown sensitive attribute '" + a + "'");
    }
  }

  const auto seed = r.get_int("seed", 0);
  if (seed < 0) throw InvalidArgument("seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.clustering.seed = c.seed;
  c.clustering.k = static_cast<int>(positive_int(r, "cluster.k"));
  c.clustering.restarts = static_cast<int>(positive_int(r, "cluster.restarts"));
  c.clustering.max_kmeans_iter =
      static_cast<int>(positive_int(r, "cluster.max_kmeans_iter"));
  c.clustering.max_exact =
      static_cast<std::size_t>(positive_int(r, "cluster.max_exact"));

  c.fit.l2 = r.get_double("fit.l2", 0.01);
  if (!(c.fit.l2 >= 0.0)) throw InvalidArgument("fit.l2 must be non-negative");
  c.fit.tol = r.get_double("fit.tol", 1e-8);
  if (!(c.fit.tol > 0.0)) throw InvalidArgument("fit.tol must be positive");
  c.fit.max_iter = static_cast<int>(positive_int(r, "fit.max_iter"));

  for (const auto& name : split_list(r.get_or("feature_sets", ""))) {
    const auto s = features::parse_feature_set(name);
    if (!s) throw InvalidArgument("unknown feature set '" + name + "'");
    if (std::find(c.feature_sets.begin(), c.feature_sets.end(), *s) ==
        c.feature_sets.end()) {
      c.feature_sets.push_back(*s);
    }
  }
  if (c.feature_sets.empty()) throw InvalidArgument("no feature sets selected");
  for (const auto& [key, target] :
       {std::pair{"table.base", &c.table_base},
        std::pair{"table.plus_r", &c.table_plus_r}}) {
    const auto name = r.get_or(key, "");
    const auto s = features::parse_feature_set(name);
    if (!s) throw InvalidArgument("unknown feature set '" + name + "' for " + key);
    *target = *s;
  }

  c.threshold = unit_interval(r, "fairness.threshold", true);
  const auto eo = r.get_or("fairness.eo_mode", "tpr");
  if (eo == "tpr") {
    c.eo_mode = fairness::EoMode::TruePositive;
  } else if (eo == "both") {
    c.eo_mode = fairness::EoMode::BothRates;
  } else {
    throw InvalidArgument("fairness.eo_mode must be 'tpr' or 'both'");
  }
  c.z = r.get_double("fairness.z", 1.96);
  if (!(c.z >= 0.0)) throw InvalidArgument("fairness.z must be non-negative");
  c.calibration_bins = static_cast<std::size_t>(positive_int(r, "calibration.bins"));

  c.out = resolve(base_dir, r.get_or("out", "revaudit-out"));
  const auto cache = r.get_or("cache_dir", "");
  if (cache == "none") {
    c.cache_dir.clear();
  } else if (cache.empty()) {
    auto normal = c.out.lexically_normal();
    if (normal.filename().empty()) normal = normal.parent_path();
    c.cache_dir = normal.parent_path() / (normal.filename().string() + ".cache");
  } else {
    c.cache_dir = resolve(base_dir, cache);
  }
  return c;
}

RunConfig load_run_config(const std::optional<fs::path>& file,
                          const std::map<std::string, std::string>& env,
                          const std::map<std::string, std::string>& overrides) {
  KeyValueConfig kv = default_settings();
  fs::path base = fs::current_path();
  if (file) {
    const auto loaded = KeyValueConfig::load(*file);
    for (const auto& [k, v] : loaded.entries()) kv.set(k, v);
    base = fs::absolute(*file).parent_path();
  }
  kv.apply_environment(env);
  for (const auto& [k, v] : overrides) kv.set(k, v);
  return RunConfig::from(kv, base);
}

std::string file_tag(features::FeatureSet set) {
  switch (set) {
    case features::FeatureSet::Base: return "base";
    case features::FeatureSet::PlusAuthor: return "plus_author";
    case features::FeatureSet::PlusRev: return "plus_rev";
    case features::FeatureSet::PlusRevNlp: return "plus_revnlp";
    case features::FeatureSet::All: return "all";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_ingest(const RunConfig& config, std::ostream& out, std::ostream& log) {
  auto in = run_stage("ingest", [&] { return ingest(config, log); });
  print_warnings(in.warnings, log);
  fs::create_directories(config.out);
  const auto report_path = config.out / "validation.txt";
  write_text(report_path, in.report.ok() ? "ok\n" : in.report.to_text());
  if (!in.report.ok()) {
    log << "error: corpus failed validation with " << in.report.violations.size()
        << " violations; see " << report_path.string() << '\n';
    return 1;
  }
  run_stage("ingest", [&] {
    fs::remove_all(config.out / "snapshot");
    corpus::write_corpus(in.corpus, config.out / "snapshot");
    return 0;
  });
  const auto summary = summary_text(in.corpus);
  write_text(config.out / "summary.txt", summary);
  out << summary;
  return 0;
}

int cmd_link(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const auto in = run_stage("ingest", [&] { return ingest_or_fail(config, log); });
  print_warnings(in.warnings, log);
  const auto l = run_stage("link", [&] {
    return linkage::link_corpus(in.corpus, config.link);
  });
  FileMap files;
  linkage_files(in.corpus, l, files);
  write_files(config.out, files);
  out << files["linkage_stats.txt"];
  return 0;
}

int cmd_featurize(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const auto in = run_stage("ingest", [&] { return ingest_or_fail(config, log); });
  print_warnings(in.warnings, log);
  const auto l = run_stage("link", [&] {
    return linkage::link_corpus(in.corpus, config.link);
  });
  const auto clusters = run_stage("cluster", [&] {
    return cluster(config, in.corpus, in.key, log);
  });
  run_stage("features", [&] {
    const auto tlds = tld_table(config);
    const auto genders = gender_dictionary(config);
    const auto ctx = features::make_attribute_context(
        in.corpus, l, tlds, genders, config.ranking,
        config.top_institution_cutoff);
    features::AssemblyInputs inputs{&in.corpus, &l, &ctx, &clusters.labels,
                                    clusters.k};
    std::vector<std::string> train;
    std::vector<std::string> test;
    split_ids(config, in.corpus, train, test);
    for (const auto set : config.feature_sets) {
      const auto m = features::build_feature_matrix(inputs, set, train, test);
      features::write_csv(m.train, config.out / ("features_" + file_tag(set) + "_train.csv"));
      features::write_csv(m.test, config.out / ("features_" + file_tag(set) + "_test.csv"));
      out << to_string(set) << '\t' << m.train.columns.size() << " columns\t"
          << m.train.ids.size() << " train\t" << m.test.ids.size() << " test\n";
    }
    std::ostringstream attrs;
    attrs << "id,year";
    for (const auto& a : config.attributes) attrs << ',' << a;
    attrs << '\n';
    for (const auto& [id, s] : in.corpus.submissions) {
      const auto sa = features::sensitive_attributes(s, ctx);
      attrs << text::csv_escape(id) << ',' << s.year;
      for (const auto& a : config.attributes) {
        attrs << ',' << flag_cell(features::attribute_value(sa, a));
      }
      attrs << '\n';
    }
    write_text(config.out / "attributes.csv", attrs.str());
    return 0;
  });
  return 0;
}

int cmd_audit(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const fs::path partial = partial_path(config.out);
  fs::remove_all(partial);
  fs::create_directories(partial);
  try {
    FileMap files;
    std::vector<std::string> warnings;
    files["config.cfg"] = config.resolved.serialize();

    auto in = run_stage("ingest", [&] { return ingest_or_fail(config, log); });
    warnings.insert(warnings.end(), in.warnings.begin(), in.warnings.end());
    const auto& c = in.corpus;
    files["validation.txt"] = "ok\n";
    files["summary.txt"] = summary_text(c);

    const auto l = run_stage("link", [&] {
      return linkage::link_corpus(c, config.link);
    });
    linkage_files(c, l, files);

    const auto clusters = run_stage("cluster", [&] {
      return cluster(config, c, in.key, log);
    });
    {
      std::ostringstream os;
      os << "id,cluster\n";
      for (const auto& [id, label] : clusters.labels) {
        os << text::csv_escape(id) << ',' << label << '\n';
      }
      files["clusters.csv"] = os.str();
    }

    const auto tlds = tld_table(config);
    const auto genders = gender_dictionary(config);
    OutcomeTable outcomes;
    outcomes.attributes = config.attributes;
    std::vector<std::string> train;
    std::vector<std::string> test;
    const auto ctx = run_stage("features", [&] {
      auto ctx = features::make_attribute_context(c, l, tlds, genders,
                                                  config.ranking,
                                                  config.top_institution_cutoff);
      split_ids(config, c, train, test);
      const std::set<std::string> test_set(test.begin(), test.end());
      for (const auto& [id, s] : c.submissions) {
        Outcome o;
        o.id = id;
        o.year = s.year;
        o.test = test_set.count(id) > 0;
        o.y = s.accepted() ? 1 : 0;
        const auto reviews = c.reviews_of(id);
        if (!reviews.empty()) {
          o.rating_avg = features::submission_aggregates(
                             std::span<const corpus::Review* const>(reviews))
                             .rating.avg;
        }
        const auto sa = features::sensitive_attributes(s, ctx);
        for (const auto& a : config.attributes) {
          o.attributes[a] = features::attribute_value(sa, a);
        }
        outcomes.rows.push_back(std::move(o));
      }
      return ctx;
    });

    // Data-level disparity: true labels as predictions over every submission.
    {
      std::ostringstream os;
      os << "attribute,dp,group_high,group_low,n_true,n_false\n";
      for (const auto& a : config.attributes) {
        std::vector<fairness::GroupedOutcome> rows;
        std::size_t n_true = 0;
        std::size_t n_false = 0;
        for (const auto& o : outcomes.rows) {
          const auto& v = o.attributes.at(a);
          if (!v) continue;
          (*v ? n_true : n_false) += 1;
          rows.push_back({o.id, static_cast<double>(o.y), o.y, *v ? "true" : "false"});
        }
        const auto report = fairness::disparity_report(a, "data", rows, 0.5);
        os << a << ',';
        if (report.dp.gap) os << text::format_double(*report.dp.gap);
        os << ',' << report.dp.group_high << ',' << report.dp.group_low << ','
           << n_true << ',' << n_false << '\n';
      }
      files["data_dp.csv"] = os.str();
    }

    std::ostringstream perf;
    perf << "feature_set,n_train,n_test,n_columns,auc_test,iterations,"
            "gradient_norm\n";
    for (const auto set : config.feature_sets) {
      const auto tag = file_tag(set);
      outcomes.tags.push_back(tag);
      run_stage("fit:" + std::string(to_string(set)), [&] {
        features::AssemblyInputs inputs{&c, &l, &ctx, &clusters.labels, clusters.k};
        const auto m = features::build_feature_matrix(inputs, set, train, test);
        Eigen::VectorXd y(static_cast<Eigen::Index>(m.train.ids.size()));
        for (std::size_t i = 0; i < m.train.ids.size(); ++i) {
          y(static_cast<Eigen::Index>(i)) =
              c.submissions.at(m.train.ids[i]).accepted() ? 1.0 : 0.0;
        }
        const auto model =
            stats::fit_logistic(m.train.values, y, m.train.columns, config.fit);
        files["models/" + tag + ".txt"] = stats::serialize_model(model);
        std::map<std::string, double> predicted;
        for (const auto* part : {&m.train, &m.test}) {
          const auto p = stats::predict_proba(model, part->values, part->columns);
          for (std::size_t i = 0; i < part->ids.size(); ++i) {
            predicted[part->ids[i]] = p(static_cast<Eigen::Index>(i));
          }
        }
        std::vector<double> p_test;
        std::vector<int> y_test;
        for (auto& o : outcomes.rows) {
          const auto it = predicted.find(o.id);
          if (it == predicted.end()) continue;
          o.predictions[tag] = it->second;
          if (o.test) {
            p_test.push_back(it->second);
            y_test.push_back(o.y);
          }
        }
        const auto roc = stats::roc_auc(p_test, y_test);
        perf << to_string(set) << ',' << m.train.ids.size() << ','
             << m.test.ids.size() << ',' << m.train.columns.size() << ','
             << text::format_double(roc.auc) << ','
             << model.convergence.iterations << ','
             << text::format_double(model.convergence.gradient_norm) << '\n';
        return 0;
      });
    }
    files["performance.csv"] = perf.str();

    run_stage("fairness", [&] {
      std::vector<fairness::DisparityReport> reports;
      std::ostringstream cdf;
      cdf << "attribute,feature_set,n_true,n_false,max_disparity\n";
      for (const auto& a : config.attributes) {
        for (const auto set : config.feature_sets) {
          const auto tag = file_tag(set);
          std::vector<fairness::GroupedOutcome> rows;
          std::vector<double> yes;
          std::vector<double> no;
          for (const auto& o : outcomes.rows) {
            const auto& v = o.attributes.at(a);
            const auto p = o.predictions.find(tag);
            if (!o.test || !v || p == o.predictions.end()) continue;
            rows.push_back({o.id, p->second, o.y, *v ? "true" : "false"});
            (*v ? yes : no).push_back(p->second);
          }
          reports.push_back(fairness::disparity_report(
              a, std::string(to_string(set)), rows, config.threshold,
              config.eo_mode));
          cdf << a << ',' << to_string(set) << ',' << yes.size() << ','
              << no.size() << ',';
          if (!yes.empty() && !no.empty()) {
            cdf << text::format_double(fairness::cdf_max_disparity(yes, no));
          }
          cdf << '\n';
        }
      }
      files["cdf_disparity.csv"] = cdf.str();

      std::ostringstream measures;
      measures << "attribute,feature_set,measure,gap,group_high,group_low,"
                  "dropped\n";
      for (const auto& r : reports) {
        warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
        for (const auto& [name, m] :
             {std::pair{"dp", &r.dp}, std::pair{"eo", &r.eo},
              std::pair{"auc", &r.auc}}) {
          std::string dropped;
          for (const auto& d : m->dropped) {
            if (!dropped.empty()) dropped += ';';
            dropped += d;
          }
          measures << r.attribute << ',' << r.feature_set << ',' << name << ',';
          if (m->gap) measures << text::format_double(*m->gap);
          measures << ',' << m->group_high << ',' << m->group_low << ','
                   << text::csv_escape(dropped) << '\n';
        }
      }
      files["disparity_measures.csv"] = measures.str();
      files["disparity_groups.csv"] = fairness::format_group_rates(reports);

      auto find = [&](const std::string& a, features::FeatureSet s)
          -> const fairness::DisparityReport* {
        for (const auto& r : reports) {
          if (r.attribute == a && r.feature_set == to_string(s)) return &r;
        }
        return nullptr;
      };
      std::vector<fairness::TableRow> table;
      for (const auto& a : config.attributes) {
        table.push_back({a, find(a, config.table_base), find(a, config.table_plus_r)});
      }
      files["disparity_table.csv"] = fairness::format_disparity_table(table);

      marginal_files(outcomes, config.z, files);
      cdf_files(outcomes, files);
      roc_calibration_files(outcomes, config.calibration_bins, true, true, files);
      files["outcomes.csv"] = outcomes_csv(outcomes);
      return 0;
    });

    std::string warning_text;
    for (const auto& w : warnings) warning_text += w + "\n";
    files["warnings.txt"] = warning_text;
    print_warnings(warnings, log);

    run_stage("report", [&] {
      write_files(partial, files);
      json manifest;
      manifest["tool"] = "revaudit";
      manifest["version"] = kVersion;
      manifest["seed"] = config.seed;
      KeyValueConfig hashed;
      for (const auto& [k, v] : config.resolved.entries()) {
        if (!is_location_key(k)) hashed.set(k, v);
      }
      const auto config_hash = hashing::sha256(hashed.serialize());
      manifest["config_sha256"] = config_hash;
      manifest["inputs"] = in.input_hashes;
      std::string run_material = config_hash + "\n";
      for (const auto& [name, hash] : in.input_hashes) {
        run_material += name + "=" + hash + "\n";
      }
      manifest["run_sha256"] = hashing::sha256(run_material);
      json outputs = json::object();
      for (const auto& [name, content] : files) {
        outputs[name] = hashing::sha256(content);
      }
      manifest["outputs"] = outputs;
      manifest["libraries"] = {
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                                "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"openssl", OPENSSL_VERSION_TEXT}};
      write_text(partial / "manifest.json", manifest.dump(2) + "\n");
      fs::remove_all(config.out);
      fs::rename(partial, config.out);
      return 0;
    });

    out << files["disparity_table.csv"] << '\n' << files["performance.csv"]
        << '\n' << files["data_dp.csv"];
    return 0;
  } catch (...) {
    std::error_code ec;
    fs::remove_all(partial, ec);
    throw;
  }
}

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = {"marginal", "cdf", "roc",
                                                 "calibration"};
  return names;
}

int cmd_plotdata(const fs::path& bundle, const std::string& figure,
                 const fs::path& out_dir, std::ostream& log) {
  const auto& names = figure_names();
  if (std::find(names.begin(), names.end(), figure) == names.end()) {
    std::string valid;
    for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown figure '" + figure + "'; valid names: " + valid);
  }
  if (!fs::exists(bundle / "manifest.json")) {
    throw Error("incomplete bundle " + bundle.string() + ": no manifest.json");
  }
  const auto cfg = KeyValueConfig::load(bundle / "config.cfg");
  const auto table = read_outcomes(bundle / "outcomes.csv");
  FileMap files;
  if (figure == "marginal") {
    marginal_files(table, cfg.get_double("fairness.z", 1.96), files);
  } else if (figure == "cdf") {
    cdf_files(table, files);
  } else {
    const auto bins = cfg.get_int("calibration.bins", 10);
    roc_calibration_files(table, static_cast<std::size_t>(bins),
                          figure == "roc", figure == "calibration", files);
  }
  write_files(out_dir, files);
  for (const auto& [name, content] : files) {
    log << (out_dir / name).string() << '\n';
  }
  return 0;
}

}  // namespace revaudit::pipeline
