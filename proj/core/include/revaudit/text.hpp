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

#ifndef REVAUDIT_TEXT_HPP_
#define REVAUDIT_TEXT_HPP_

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace revaudit::text {

// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD one
// byte at a time so that every input has a well-defined decoding.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

// Simple case folding: ASCII and the Latin-1 supplement.
char32_t fold_code_point(char32_t c);
std::u32string case_fold(std::u32string_view s);
std::string case_fold(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Shortest representation that parses back to the identical double.
std::string format_double(double v);
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Comma-separated values with RFC 4180 quoting.
std::vector<std::string> parse_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

}  // namespace revaudit::text

#endif  // REVAUDIT_TEXT_HPP_
