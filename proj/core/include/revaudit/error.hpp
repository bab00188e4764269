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

#ifndef REVAUDIT_ERROR_HPP_
#define REVAUDIT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace revaudit {

// Base for every error raised by the library. Stage errors raised by the
// pipeline carry the stage name in what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A record in an input file failed to parse or violated a field contract.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, std::string field,
             const std::string& message);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

// Foreign ids that do not resolve inside the corpus.
class IntegrityError : public Error {
 public:
  explicit IntegrityError(std::vector<std::string> offenders);

  const std::vector<std::string>& offenders() const { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

// A statistic that is not defined for the given input (empty corpus,
// single-class labels, a group without positives, ...).
class UndefinedStatistic : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// The optimisation problem has no unique solution (e.g. a rank-deficient
// design without ridge penalty).
class IllPosedError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message);

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace revaudit

#endif  // REVAUDIT_ERROR_HPP_
