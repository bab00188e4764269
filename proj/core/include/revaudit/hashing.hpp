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

#ifndef REVAUDIT_HASHING_HPP_
#define REVAUDIT_HASHING_HPP_

#include <filesystem>
#include <string>
#include <string_view>

namespace revaudit::hashing {

// Lowercase hex SHA-256 digests.
std::string sha256(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace revaudit::hashing

#endif  // REVAUDIT_HASHING_HPP_
