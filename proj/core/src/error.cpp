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

#include "revaudit/error.hpp"

#include <utility>

namespace revaudit {

ParseError::ParseError(std::string file, std::size_t line, std::string field,
                       const std::string& message)
    : Error(file + ":" + std::to_string(line) + ": field '" + field +
            "': " + message),
      file_(std::move(file)),
      line_(line),
      field_(std::move(field)) {}

namespace {

std::string describe_offenders(const std::vector<std::string>& offenders) {
  std::string msg = "referential integrity violated (" +
                    std::to_string(offenders.size()) + " dangling ids)";
  for (std::size_t i = 0; i < offenders.size() && i < 20; ++i) {
    msg += i == 0 ? ": " : ", ";
    msg += offenders[i];
  }
  if (offenders.size() > 20) msg += ", ...";
  return msg;
}

}  // namespace

IntegrityError::IntegrityError(std::vector<std::string> offenders)
    : Error(describe_offenders(offenders)), offenders_(std::move(offenders)) {}

StageError::StageError(std::string stage, const std::string& message)
    : Error("stage '" + stage + "' failed: " + message),
      stage_(std::move(stage)) {}

}  // namespace revaudit
