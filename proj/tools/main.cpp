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

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "revaudit/config.hpp"
#include "revaudit/error.hpp"
#include "revaudit/pipeline.hpp"
#include "revaudit/synthetic.hpp"

namespace fs = std::filesystem;
using namespace revaudit;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<long long> seed;
  std::vector<std::string> feature_sets;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Run configuration file (key = value)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Seed for every random choice");
  cmd->add_option("--feature-set", f.feature_sets,
                  "Feature set to fit: base, +author, +rev, +revnlp, all")
      ->delimiter(',');
  cmd->add_option("--out", f.out, "Output directory");
}

pipeline::RunConfig run_config(const CommonFlags& f) {
  std::map<std::string, std::string> overrides;
  if (f.seed) overrides["seed"] = std::to_string(*f.seed);
  if (!f.feature_sets.empty()) {
    std::string joined;
    for (const auto& s : f.feature_sets) joined += (joined.empty() ? "" : ",") + s;
    overrides["feature_sets"] = joined;
  }
  if (!f.out.empty()) overrides["out"] = fs::absolute(f.out).string();
  std::optional<fs::path> file;
  if (!f.config.empty()) file = f.config;
  return pipeline::load_run_config(file, KeyValueConfig::environment(),
                                   overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"revaudit: peer-review corpus fairness audit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pipeline::kVersion);

  CommonFlags ingest_flags;
  CommonFlags link_flags;
  CommonFlags featurize_flags;
  CommonFlags audit_flags;
  auto* ingest = app.add_subcommand("ingest", "Validate inputs and write a snapshot");
  auto* link = app.add_subcommand("link", "Resolve scholars, institutions and preprints");
  auto* featurize = app.add_subcommand("featurize", "Write design matrices and attributes");
  auto* audit = app.add_subcommand("audit", "Fit surrogates and write the report bundle");
  add_common(ingest, ingest_flags);
  add_common(link, link_flags);
  add_common(featurize, featurize_flags);
  add_common(audit, audit_flags);

  std::string bundle;
  std::string figure;
  std::string plot_out;
  auto* plotdata = app.add_subcommand("plotdata", "Regenerate plot data from a bundle");
  plotdata->add_option("--bundle", bundle, "Report bundle directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  plotdata->add_option("--figure", figure, "marginal, cdf, roc or calibration")
      ->required();
  plotdata->add_option("--out", plot_out, "Output directory (default <bundle>/plots)");

  synthetic::Options synth_options;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic input corpus");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--submissions", synth_options.n_submissions, "Number of submissions");
  synth->add_option("--seed", synth_options.seed, "Generator seed");
  synth->add_option("--rate-na", synth_options.accept_rate_na,
                    "Acceptance rate of North American teams");
  synth->add_option("--rate-other", synth_options.accept_rate_other,
                    "Acceptance rate of other teams");
  synth->add_option("--embedding-dim", synth_options.embedding_dim,
                    "Embedding dimension");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      return pipeline::cmd_ingest(run_config(ingest_flags), std::cout, std::cerr);
    }
    if (link->parsed()) {
      return pipeline::cmd_link(run_config(link_flags), std::cout, std::cerr);
    }
    if (featurize->parsed()) {
      return pipeline::cmd_featurize(run_config(featurize_flags), std::cout,
                                     std::cerr);
    }
    if (audit->parsed()) {
      return pipeline::cmd_audit(run_config(audit_flags), std::cout, std::cerr);
    }
    if (plotdata->parsed()) {
      const fs::path out = plot_out.empty() ? fs::path(bundle) / "plots" : fs::path(plot_out);
      return pipeline::cmd_plotdata(bundle, figure, out, std::cerr);
    }
    if (synth->parsed()) {
      const auto data = synthetic::generate(synth_options);
      synthetic::write_inputs(data, synth_out);
      std::cout << "submissions\t" << data.corpus.submissions.size() << '\n'
                << "reviews\t" << data.truth.n_reviews << '\n'
                << "planted_dp\t" << data.truth.planted_dp << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
