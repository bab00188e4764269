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

#ifndef REVAUDIT_CONFIG_HPP_
#define REVAUDIT_CONFIG_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace revaudit {

// Flat key-value settings. The text form is one `key = value` per line;
// blank lines and lines starting with '#' are ignored.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text,
                              const std::string& origin = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  // Applies REVAUDIT_<KEY> environment variables on top of the file values.
  // Keys are upper-cased and '.' becomes '_' to form the variable name.
  void apply_environment(const std::map<std::string, std::string>& env);
  static std::map<std::string, std::string> environment(
      std::string_view prefix = "REVAUDIT_");

  bool contains(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, std::string fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;

  void set(const std::string& key, std::string value);
  const std::map<std::string, std::string>& entries() const { return values_; }

  // Canonical text (sorted keys) used for hashing and persisting.
  std::string serialize() const;

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

}  // namespace revaudit

#endif  // REVAUDIT_CONFIG_HPP_
