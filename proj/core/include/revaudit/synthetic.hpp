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

#ifndef REVAUDIT_SYNTHETIC_HPP_
#define REVAUDIT_SYNTHETIC_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "revaudit/corpus.hpp"

namespace revaudit::synthetic {

// A generated corpus with planted group-conditional acceptance. Half the
// submissions have North American author teams (.edu/.ca domains), half
// have teams from elsewhere. Within each group exactly
// round(rate * group size) submissions are accepted, chosen by a latent
// quality that also drives review ratings.
struct Options {
  std::size_t n_submissions = 1000;
  int year_min = 2017;
  int year_max = 2022;
  std::uint64_t seed = 7;
  double accept_rate_na = 0.5;
  double accept_rate_other = 0.2;
  // Author pool per group; 0 picks max(20, n_submissions / 5).
  std::size_t authors_per_group = 0;
  std::size_t embedding_dim = 32;
  int n_topics = 8;
  // Per-review rating noise in rating units.
  double rating_noise = 0.6;
  // Every odd submission duplicates the preceding one with authors from
  // the other group. Requires equal acceptance rates.
  bool mirror_groups = false;
  // Extra withdrawn submissions (with reviews) that loading must drop.
  std::size_t n_withdrawn = 5;
  double arxiv_fraction = 0.3;
};

struct GroundTruth {
  std::size_t n_na = 0;
  std::size_t n_other = 0;
  std::size_t accepted_na = 0;
  std::size_t accepted_other = 0;
  // accepted_na / n_na - accepted_other / n_other, in magnitude.
  double planted_dp = 0.0;
  std::size_t n_reviews = 0;
  std::map<int, std::size_t> submissions_per_year;
};

struct Dataset {
  // Includes language-model values inline; write_inputs() splits them out
  // into feature files.
  corpus::Corpus corpus;
  // Review ids of withdrawn submissions, written to the raw inputs only.
  std::vector<corpus::Review> withdrawn_reviews;
  std::map<std::string, double> gender_scores;
  GroundTruth truth;
};

Dataset generate(const Options& options);

// Raw input files, the three feature files, genders.csv and a run
// configuration `revaudit.cfg` whose paths are relative to `dir`.
void write_inputs(const Dataset& data, const std::filesystem::path& dir);

}  // namespace revaudit::synthetic

#endif  // REVAUDIT_SYNTHETIC_HPP_
