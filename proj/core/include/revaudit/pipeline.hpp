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

#ifndef REVAUDIT_PIPELINE_HPP_
#define REVAUDIT_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "revaudit/config.hpp"
#include "revaudit/corpus.hpp"
#include "revaudit/fairness.hpp"
#include "revaudit/features.hpp"
#include "revaudit/linkage.hpp"
#include "revaudit/stats.hpp"

namespace revaudit::pipeline {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  // Relative input paths resolve against this directory.
  std::filesystem::path base_dir;
  corpus::CorpusPaths inputs;
  std::filesystem::path genders;
  std::filesystem::path tld_overrides;
  corpus::CorpusConfig corpus;

  std::vector<int> train_years;
  std::vector<int> test_years;

  linkage::LinkOptions link;
  features::RankingChoice ranking = features::RankingChoice::CSRanking;
  int top_institution_cutoff = 10;

  std::uint64_t seed = 0;
  stats::SpectralOptions clustering;
  stats::FitOptions fit;
  std::vector<features::FeatureSet> feature_sets;
  // Feature sets reported in the plain and "+R" columns of the table.
  features::FeatureSet table_base = features::FeatureSet::PlusRev;
  features::FeatureSet table_plus_r = features::FeatureSet::PlusRevNlp;

  std::vector<std::string> attributes;
  double threshold = 0.5;
  fairness::EoMode eo_mode = fairness::EoMode::TruePositive;
  double z = 1.96;
  std::size_t calibration_bins = 10;

  std::filesystem::path out;
  // Stage cache; empty disables caching.
  std::filesystem::path cache_dir;

  // Every setting after defaults, file, environment and flags.
  KeyValueConfig resolved;

  // Validates ranges and the year split.
  static RunConfig from(const KeyValueConfig& kv,
                        const std::filesystem::path& base_dir);
};

// Every recognised key with its default value.
KeyValueConfig default_settings();

// Defaults, then the config file (if any), then REVAUDIT_* variables, then
// `overrides` (command-line flags).
RunConfig load_run_config(const std::optional<std::filesystem::path>& file,
                          const std::map<std::string, std::string>& env,
                          const std::map<std::string, std::string>& overrides);

// File-name tag for a feature set: base, plus_author, plus_rev, ...
std::string file_tag(features::FeatureSet set);

// Each command returns the process exit code. Diagnostics go to `log`;
// printed tables go to `out`.
int cmd_ingest(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_link(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_featurize(const RunConfig& config, std::ostream& out,
                  std::ostream& log);
// Writes the report bundle to config.out atomically: on any stage error
// the partial directory is removed and a StageError naming the stage is
// thrown.
int cmd_audit(const RunConfig& config, std::ostream& out, std::ostream& log);

const std::vector<std::string>& figure_names();
// Regenerates plot data for one figure from a finished bundle. Unknown
// names raise InvalidArgument listing the valid ones.
int cmd_plotdata(const std::filesystem::path& bundle, const std::string& figure,
                 const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace revaudit::pipeline

#endif  // REVAUDIT_PIPELINE_HPP_
