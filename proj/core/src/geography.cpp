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

#include <array>
#include <fstream>

#include "revaudit/error.hpp"
#include "revaudit/features.hpp"
#include "revaudit/text.hpp"

namespace revaudit::features {

namespace {

// ISO 3166-1 alpha-2 codes whose ccTLD is the lower-cased code.
constexpr std::string_view kCountryCodes[] = {
    "ad", "ae", "af", "ag", "al", "am", "ao", "aq", "ar", "as", "at", "au",
    "aw", "ax", "az", "ba", "bb", "bd", "be", "bf", "bg", "bh", "bi", "bj",
    "bl", "bm", "bn", "bo", "bq", "br", "bs", "bt", "bw", "by", "bz", "ca",
    "cd", "cf", "cg", "ch", "ci", "ck", "cl", "cm", "cn", "cr", "cu", "cv",
    "cw", "cx", "cy", "cz", "de", "dj", "dk", "dm", "do", "dz", "ec", "ee",
    "eg", "eh", "er", "es", "et", "fi", "fj", "fk", "fo", "fr", "ga", "gd",
    "ge", "gf", "gg", "gh", "gi", "gl", "gm", "gn", "gp", "gq", "gr", "gs",
    "gt", "gu", "gw", "gy", "hk", "hm", "hn", "hr", "ht", "hu", "id", "ie",
    "il", "im", "in", "iq", "ir", "is", "it", "je", "jm", "jo", "jp", "ke",
    "kg", "kh", "ki", "km", "kn", "kp", "kr", "kw", "ky", "kz", "la", "lb",
    "lc", "li", "lk", "lr", "ls", "lt", "lu", "lv", "ma", "mc", "md", "mf",
    "mg", "mh", "mk", "ml", "mm", "mn", "mo", "mp", "mq", "mr", "ms", "mt",
    "mu", "mv", "mw", "mx", "my", "mz", "na", "nc", "ne", "nf", "ng", "ni",
    "nl", "no", "np", "nr", "nu", "nz", "om", "pa", "pe", "pf", "pg", "ph",
    "pk", "pl", "pm", "pn", "pr", "ps", "pt", "pw", "py", "qa", "re", "ro",
    "rs", "ru", "rw", "sa", "sb", "sc", "sd", "se", "sg", "sh", "si", "sk",
    "sl", "sm", "sn", "so", "sr", "ss", "st", "sv", "sx", "sy", "sz", "tc",
    "td", "tf", "tg", "th", "tj", "tk", "tl", "tm", "tn", "tr", "tt", "tw",
    "tz", "ua", "ug", "um", "us", "uy", "uz", "va", "vc", "ve", "vg", "vi",
    "vn", "vu", "wf", "ye", "yt", "za", "zm", "zw", "bv", "sj", "io", "gb"};

// ccTLDs marketed for generic use; treated like .com unless overridden.
constexpr std::string_view kGenericUseCc[] = {
    "io", "ai", "co", "me", "tv", "ly", "fm", "to", "ws", "cc"};

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

template <typename Fn>
void read_pairs(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::parse_csv_line(line);
    if (fields.size() != 2) {
      throw ParseError(path.string(), line_no, "<record>",
                       "expected two comma-separated columns");
    }
    fn(std::string(text::trim(fields[0])), std::string(text::trim(fields[1])),
       line_no);
  }
}

}  // namespace

TldTable TldTable::bundled() {
  TldTable t;
  for (auto code : kCountryCodes) {
    bool generic = false;
    for (auto g : kGenericUseCc) generic = generic || g == code;
    if (!generic) t.set(std::string(code), upper(code));
  }
  t.set("uk", "GB");
  t.set("edu", "US");
  t.set("gov", "US");
  t.set("mil", "US");
  return t;
}

TldTable TldTable::load(const std::filesystem::path& path) {
  TldTable t;
  read_pairs(path, [&](std::string suffix, std::string country, std::size_t) {
    if (text::case_fold(suffix) == "suffix") return;
    t.set(std::move(suffix), std::move(country));
  });
  return t;
}

void TldTable::merge(const TldTable& overrides) {
  for (const auto& [suffix, country] : overrides.suffixes_) {
    suffixes_[suffix] = country;
  }
}

void TldTable::set(std::string suffix, std::string country) {
  auto key = text::case_fold(text::trim(suffix));
  while (!key.empty() && key.front() == '.') key.erase(key.begin());
  suffixes_[key] = upper(text::trim(country));
}

std::optional<std::string> TldTable::country_of(std::string_view domain) const {
  auto d = text::case_fold(text::trim(domain));
  if (const auto at = d.rfind('@'); at != std::string::npos) {
    d = d.substr(at + 1);
  }
  while (!d.empty() && d.back() == '.') d.pop_back();
  // Walk suffixes from the longest (whole domain) to the TLD.
  std::string_view rest(d);
  while (!rest.empty()) {
    if (auto it = suffixes_.find(std::string(rest)); it != suffixes_.end()) {
      return it->second;
    }
    const auto dot = rest.find('.');
    if (dot == std::string_view::npos) break;
    rest.remove_prefix(dot + 1);
  }
  return std::nullopt;
}

GenderDictionary GenderDictionary::load(const std::filesystem::path& path) {
  GenderDictionary dict;
  read_pairs(path, [&](std::string name, std::string score, std::size_t line) {
    const auto v = text::parse_double(score);
    if (!v) {
      if (line == 1) return;  // header
      throw ParseError(path.string(), line, "male_score", "expected a number");
    }
    if (*v < 0.0 || *v > 1.0) {
      throw ParseError(path.string(), line, "male_score",
                       "score outside [0,1]");
    }
    dict.set(name, *v);
  });
  return dict;
}

void GenderDictionary::set(std::string_view name, double male_score) {
  if (!(male_score >= 0.0 && male_score <= 1.0)) {
    throw InvalidArgument("male score outside [0,1]");
  }
  scores_[text::case_fold(text::trim(name))] = male_score;
}

std::optional<double> GenderDictionary::male_score(
    std::string_view first_name) const {
  const auto it = scores_.find(text::case_fold(text::trim(first_name)));
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> email_domain_at(const corpus::Author& author,
                                           int year) {
  if (author.email_domains.empty()) return std::nullopt;
  if (!author.affiliations.empty()) {
    if (auto it = author.email_domains.find(year);
        it != author.email_domains.end()) {
      return it->second;
    }
  }
  return author.email_domains.rbegin()->second;
}

std::optional<std::string> geography_of_author(const corpus::Author& author,
                                               int year, const TldTable& tlds) {
  const auto domain = email_domain_at(author, year);
  if (!domain) return std::nullopt;
  return tlds.country_of(*domain);
}

std::optional<double> perceived_gender(std::string_view first_name,
                                       const GenderDictionary& dictionary) {
  return dictionary.male_score(first_name);
}

bool is_north_america(std::string_view country) {
  return country == "US" || country == "CA" || country == "MX";
}

}  // namespace revaudit::features
