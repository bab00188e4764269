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

// Brute-force reference implementations and small random generators shared
// by the unit tests and the acceptance runner.

#ifndef REVAUDIT_TESTS_SUPPORT_HPP_
#define REVAUDIT_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "revaudit/fairness.hpp"

namespace revaudit::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  double real(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return real() < p; }

  std::string word(int min_len, int max_len, std::string_view alphabet = "abc") {
    const int len = integer(min_len, max_len);
    std::string s;
    for (int i = 0; i < len; ++i) {
      s.push_back(alphabet[static_cast<std::size_t>(
          integer(0, static_cast<int>(alphabet.size()) - 1))]);
    }
    return s;
  }

  // Scores drawn from a small grid so that ties are common.
  std::vector<double> tied_scores(std::size_t n, int levels) {
    std::vector<double> v(n);
    for (auto& s : v) s = integer(0, levels - 1) / static_cast<double>(levels);
    return v;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Textbook Wagner-Fischer table over bytes.
inline std::size_t edit_distance_oracle(const std::string& a,
                                        const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[a.size()][b.size()];
}

// ASCII-only lowering; enough for generated inputs.
inline std::string lower_ascii(std::string s) {
  for (auto& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

inline double similarity_oracle(const std::string& a, const std::string& b) {
  const auto la = lower_ascii(a);
  const auto lb = lower_ascii(b);
  const auto m = std::max(la.size(), lb.size());
  if (m == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance_oracle(la, lb)) /
                   static_cast<double>(m);
}

// P(s+ > s-) + P(tie) / 2 by enumerating every positive-negative pair.
inline double mann_whitney_oracle(const std::vector<double>& scores,
                                  const std::vector<int>& labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

inline double ecdf(const std::vector<double>& s, double t) {
  double c = 0.0;
  for (double v : s) c += v <= t ? 1.0 : 0.0;
  return c / static_cast<double>(s.size());
}

inline double ks_oracle(const std::vector<double>& a,
                        const std::vector<double>& b) {
  double best = 0.0;
  for (const auto* s : {&a, &b}) {
    for (double t : *s) best = std::max(best, std::abs(ecdf(a, t) - ecdf(b, t)));
  }
  return best;
}

struct OracleGroup {
  double n = 0, pred = 0, pos = 0, tp = 0;
  std::vector<double> scores;
  std::vector<int> labels;
};

inline std::map<std::string, OracleGroup> oracle_groups(
    const std::vector<fairness::GroupedOutcome>& rows, double threshold) {
  std::map<std::string, OracleGroup> g;
  for (const auto& r : rows) {
    auto& o = g[r.group];
    const bool yhat = r.score >= threshold;
    o.n += 1;
    o.pred += yhat ? 1 : 0;
    o.pos += r.y;
    o.tp += (yhat && r.y == 1) ? 1 : 0;
    o.scores.push_back(r.score);
    o.labels.push_back(r.y);
  }
  return g;
}

// max over ordered pairs a != a' of |rate(a) - rate(a')|.
template <typename Rate>
double pairwise_max(const std::map<std::string, OracleGroup>& groups,
                    Rate rate) {
  double best = 0.0;
  for (const auto& [a, ga] : groups) {
    for (const auto& [b, gb] : groups) {
      if (a == b) continue;
      best = std::max(best, std::abs(rate(ga) - rate(gb)));
    }
  }
  return best;
}

inline double dp_oracle(const std::vector<fairness::GroupedOutcome>& rows,
                        double threshold = 0.5) {
  return pairwise_max(oracle_groups(rows, threshold),
                      [](const OracleGroup& g) { return g.pred / g.n; });
}

inline double eo_oracle(const std::vector<fairness::GroupedOutcome>& rows,
                        double threshold = 0.5) {
  return pairwise_max(oracle_groups(rows, threshold),
                      [](const OracleGroup& g) { return g.tp / g.pos; });
}

inline double auc_gap_oracle(const std::vector<fairness::GroupedOutcome>& rows) {
  return pairwise_max(oracle_groups(rows, 0.5), [](const OracleGroup& g) {
    return mann_whitney_oracle(g.scores, g.labels);
  });
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("revaudit_test_" + name + "_" +
                    std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path fixture_dir() {
  return std::filesystem::path(REVAUDIT_FIXTURE_DIR);
}

}  // namespace revaudit::testing

#endif  // REVAUDIT_TESTS_SUPPORT_HPP_
