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

#ifndef REVAUDIT_STATS_HPP_
#define REVAUDIT_STATS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace revaudit::stats {

// ---------------------------------------------------------------------------
// L2-regularised logistic regression
// ---------------------------------------------------------------------------

struct Convergence {
  int iterations = 0;
  double gradient_norm = 0.0;
  // Penalised loss after each accepted step, starting at the initial point.
  std::vector<double> loss_history;
};

struct LogisticModel {
  std::vector<std::string> columns;
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  double l2 = 0.0;
  Convergence convergence;
};

struct FitOptions {
  double l2 = 1e-2;
  double tol = 1e-8;
  int max_iter = 200;
};

// Mean negative log-likelihood + (l2 / 2) * |w|^2; the intercept is not
// penalised. Parameters are laid out as [intercept, w...].
double penalized_loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& params, double l2);
Eigen::VectorXd penalized_gradient(const Eigen::MatrixXd& x,
                                   const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& params, double l2);

// Damped Newton iterations with a backtracking line search. Throws
// IllPosedError for a rank-deficient design with l2 == 0 and
// ConvergenceError when the gradient norm does not reach tol.
LogisticModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           std::vector<std::string> columns,
                           const FitOptions& options = {});

double sigmoid(double z);

// Column names must match the model exactly.
Eigen::VectorXd predict_proba(const LogisticModel& model,
                              const Eigen::MatrixXd& x,
                              const std::vector<std::string>& columns);

// Text round trip; reloaded models reproduce predict_proba bit-identically.
std::string serialize_model(const LogisticModel& model);
LogisticModel parse_model(const std::string& text);
void save_model(const LogisticModel& model, const std::filesystem::path& path);
LogisticModel load_model(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// ROC / AUC and calibration
// ---------------------------------------------------------------------------

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  // Starts at (0,0), ends at (1,1). The first point's threshold is +inf.
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// Sweeps every distinct score; tied scores contribute half, so auc equals
// P(score+ > score-) + P(tie) / 2. Throws UndefinedStatistic when only one
// class is present.
RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels);

// The same AUC without building the curve.
double auc_score(std::span<const double> scores, std::span<const int> labels);

// Trapezoidal area under the stored points.
double trapezoid_area(const std::vector<RocPoint>& points);

struct CalibrationBin {
  double lower = 0.0;
  double upper = 0.0;
  double mean_predicted = 0.0;
  double positive_rate = 0.0;
  std::size_t count = 0;
};

struct CalibrationCurve {
  std::size_t n_bins = 10;
  // Occupied bins only, in increasing order.
  std::vector<CalibrationBin> bins;
};

// Equal-width bins on [0, 1]: [b/n, (b+1)/n), the last bin closed at 1.
std::size_t calibration_bin(double p, std::size_t n_bins);
CalibrationCurve calibration_curve(std::span<const double> probs,
                                   std::span<const int> labels,
                                   std::size_t n_bins = 10);

// ---------------------------------------------------------------------------
// Spectral clustering
// ---------------------------------------------------------------------------

struct SpectralOptions {
  int k = 20;
  std::uint64_t seed = 0;
  int restarts = 10;
  int max_kmeans_iter = 300;
  // Above this many items the eigenproblem is solved on a seeded landmark
  // subset and extended to the remaining items (Nystrom).
  std::size_t max_exact = 2000;
};

struct ClusterAssignment {
  std::map<std::string, int> labels;
  int k = 0;
};

// Affinity max(cosine, 0), symmetric normalised Laplacian, k smallest
// eigenvectors with rows normalised, then seeded k-means++ with restarts.
// Labels are canonicalised by first appearance in id order, which makes the
// result independent of input order.
ClusterAssignment spectral_cluster(
    const std::map<std::string, std::vector<double>>& embeddings,
    const SpectralOptions& options);

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  double inertia = 0.0;
};

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int restarts, int max_iter);

}  // namespace revaudit::stats

#endif  // REVAUDIT_STATS_HPP_
