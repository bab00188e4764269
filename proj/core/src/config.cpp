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

#include "revaudit/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "revaudit/error.hpp"
#include "revaudit/text.hpp"

extern char** environ;

namespace revaudit {

KeyValueConfig KeyValueConfig::parse(std::string_view text,
                                     const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::size_t line_no = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(origin, line_no, std::string(line),
                       "expected 'key = value'");
    }
    const auto key = std::string(text::trim(line.substr(0, eq)));
    if (key.empty()) {
      throw ParseError(origin, line_no, "", "empty key");
    }
    cfg.values_[key] = std::string(text::trim(line.substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open config file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::map<std::string, std::string> KeyValueConfig::environment(
    std::string_view prefix) {
  std::map<std::string, std::string> env;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    const std::string_view entry(*e);
    if (entry.substr(0, prefix.size()) != prefix) continue;
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    env.emplace(std::string(entry.substr(0, eq)),
                std::string(entry.substr(eq + 1)));
  }
  return env;
}

void KeyValueConfig::apply_environment(
    const std::map<std::string, std::string>& env) {
  // Known keys map directly; unknown REVAUDIT_ variables introduce new
  // lower-cased keys.
  std::map<std::string, std::string> name_to_key;
  for (const auto& [key, value] : values_) {
    std::string name = "REVAUDIT_";
    for (char c : key) {
      name.push_back(c == '.' ? '_'
                              : static_cast<char>(std::toupper(
                                    static_cast<unsigned char>(c))));
    }
    name_to_key[name] = key;
  }
  for (const auto& [name, value] : env) {
    if (auto it = name_to_key.find(name); it != name_to_key.end()) {
      values_[it->second] = value;
    } else if (name.rfind("REVAUDIT_", 0) == 0) {
      std::string key = name.substr(9);
      std::transform(key.begin(), key.end(), key.begin(), [](char c) {
        return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      });
      if (!key.empty()) values_[key] = value;
    }
  }
}

bool KeyValueConfig::contains(const std::string& key) const {
  return values_.count(key) > 0;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return std::nullopt;
}

std::string KeyValueConfig::get_or(const std::string& key,
                                   std::string fallback) const {
  if (auto v = get(key)) return *v;
  return fallback;
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  const auto parsed = text::parse_double(*v);
  if (!parsed) {
    throw InvalidArgument("config key '" + key + "' in " + origin_ +
                          " is not a number: '" + *v + "'");
  }
  return *parsed;
}

long long KeyValueConfig::get_int(const std::string& key,
                                  long long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  const auto parsed = text::parse_int(*v);
  if (!parsed) {
    throw InvalidArgument("config key '" + key + "' in " + origin_ +
                          " is not an integer: '" + *v + "'");
  }
  return *parsed;
}

void KeyValueConfig::set(const std::string& key, std::string value) {
  values_[key] = std::move(value);
}

std::string KeyValueConfig::serialize() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace revaudit
