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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "revaudit/error.hpp"
#include "revaudit/stats.hpp"

namespace revaudit::stats {

namespace {

double squared_distance(const Eigen::MatrixXd& points, Eigen::Index i,
                        const Eigen::MatrixXd& centroids, Eigen::Index c) {
  return (points.row(i) - centroids.row(c)).squaredNorm();
}

// k-means++ seeding followed by Lloyd iterations.
KMeansResult lloyd(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng,
                   int max_iter) {
  const Eigen::Index n = points.rows();
  KMeansResult r;
  r.centroids.resize(k, points.cols());

  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  r.centroids.row(0) = points.row(pick(rng));
  std::vector<double> d2(static_cast<std::size_t>(n),
                         std::numeric_limits<double>::infinity());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& d = d2[static_cast<std::size_t>(i)];
      d = std::min(d, squared_distance(points, i, r.centroids, c - 1));
      total += d;
    }
    Eigen::Index chosen = n - 1;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[static_cast<std::size_t>(i)];
        if (acc > target && d2[static_cast<std::size_t>(i)] > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    r.centroids.row(c) = points.row(chosen);
  }

  r.labels.assign(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points, i, r.centroids, 0);
      for (int c = 1; c < k; ++c) {
        const double d = squared_distance(points, i, r.centroids, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      auto& label = r.labels[static_cast<std::size_t>(i)];
      if (label != best) {
        label = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = r.labels[static_cast<std::size_t>(i)];
      sums.row(c) += points.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        r.centroids.row(c) =
            sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: move it onto the point farthest from its centroid.
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = squared_distance(
            points, i, r.centroids, r.labels[static_cast<std::size_t>(i)]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      r.centroids.row(c) = points.row(far);
    }
  }

  r.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    r.inertia += squared_distance(points, i, r.centroids,
                                  r.labels[static_cast<std::size_t>(i)]);
  }
  return r;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int restarts, int max_iter) {
  if (k <= 0) throw InvalidArgument("k-means: k must be positive");
  if (points.rows() < k) {
    throw InvalidArgument("k-means: fewer points than clusters");
  }
  std::mt19937_64 rng(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    auto candidate = lloyd(points, k, rng, max_iter);
    if (candidate.inertia < best.inertia) best = std::move(candidate);
  }
  return best;
}

ClusterAssignment spectral_cluster(
    const std::map<std::string, std::vector<double>>& embeddings,
    const SpectralOptions& options) {
  const int k = options.k;
  if (k <= 0) throw InvalidArgument("spectral clustering: k must be positive");
  const auto n = static_cast<Eigen::Index>(embeddings.size());
  if (n < k) {
    throw InvalidArgument("spectral clustering: " + std::to_string(n) +
                          " items for k = " + std::to_string(k));
  }

  std::vector<std::string> ids;
  ids.reserve(embeddings.size());
  const auto dim = static_cast<Eigen::Index>(embeddings.begin()->second.size());
  Eigen::MatrixXd unit(n, dim);
  {
    Eigen::Index i = 0;
    for (const auto& [id, v] : embeddings) {
      if (static_cast<Eigen::Index>(v.size()) != dim) {
        throw InvalidArgument("spectral clustering: embedding dimensions differ");
      }
      const Eigen::Map<const Eigen::VectorXd> row(v.data(), dim);
      const double norm = row.norm();
      if (norm == 0.0 || !std::isfinite(norm)) {
        throw InvalidArgument("spectral clustering: zero or non-finite "
                              "embedding for " + id);
      }
      unit.row(i) = row.transpose() / norm;
      ids.push_back(id);
      ++i;
    }
  }

  // Landmarks: all items, or a seeded subset of fixed size.
  std::vector<Eigen::Index> landmarks(static_cast<std::size_t>(n));
  std::iota(landmarks.begin(), landmarks.end(), Eigen::Index{0});
  const auto m_limit = static_cast<Eigen::Index>(
      std::max<std::size_t>(options.max_exact, static_cast<std::size_t>(k)));
  if (n > m_limit) {
    std::mt19937_64 rng(options.seed ^ 0x9E3779B97F4A7C15ULL);
    std::shuffle(landmarks.begin(), landmarks.end(), rng);
    landmarks.resize(static_cast<std::size_t>(m_limit));
    std::sort(landmarks.begin(), landmarks.end());
  }
  const auto m = static_cast<Eigen::Index>(landmarks.size());
  Eigen::MatrixXd basis(m, dim);
  for (Eigen::Index i = 0; i < m; ++i) {
    basis.row(i) = unit.row(landmarks[static_cast<std::size_t>(i)]);
  }

  Eigen::MatrixXd affinity = (basis * basis.transpose()).cwiseMax(0.0);
  affinity.diagonal().setOnes();
  const Eigen::VectorXd degree = affinity.rowwise().sum();
  const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd normalized =
      inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal();

  // Smallest eigenvalues of I - N are the largest of N.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized);
  if (solver.info() != Eigen::Success) {
    throw Error("spectral clustering: eigensolver failed");
  }
  const Eigen::MatrixXd top = solver.eigenvectors().rightCols(k);
  const Eigen::VectorXd top_values = solver.eigenvalues().tail(k);

  Eigen::MatrixXd spectral = Eigen::MatrixXd::Zero(n, k);
  std::vector<bool> is_landmark(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto idx = landmarks[static_cast<std::size_t>(i)];
    spectral.row(idx) = top.row(i);
    is_landmark[static_cast<std::size_t>(idx)] = true;
  }
  if (m < n) {
    // Nystrom extension: u(x) = (1 / lambda) * sum_i N(x, i) u_i.
    const Eigen::MatrixXd scaled_top = inv_sqrt.asDiagonal() * top;
    constexpr Eigen::Index kBlock = 512;
    for (Eigen::Index start = 0; start < n; start += kBlock) {
      const Eigen::Index len = std::min(kBlock, n - start);
      Eigen::MatrixXd block_aff =
          (unit.middleRows(start, len) * basis.transpose()).cwiseMax(0.0);
      const Eigen::MatrixXd projected = block_aff * scaled_top;
      for (Eigen::Index r = 0; r < len; ++r) {
        const auto idx = start + r;
        if (is_landmark[static_cast<std::size_t>(idx)]) continue;
        const double d = block_aff.row(r).sum();
        if (d <= 0.0) continue;
        for (int c = 0; c < k; ++c) {
          const double lambda = top_values(c);
          spectral(idx, c) =
              lambda > 1e-12 ? projected(r, c) / (std::sqrt(d) * lambda) : 0.0;
        }
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = spectral.row(i).norm();
    if (norm > 0.0) spectral.row(i) /= norm;
  }

  const auto km = kmeans(spectral, k, options.seed, options.restarts,
                         options.max_kmeans_iter);

  ClusterAssignment out;
  out.k = k;
  std::map<int, int> canonical;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int raw = km.labels[static_cast<std::size_t>(i)];
    const auto [it, inserted] =
        canonical.emplace(raw, static_cast<int>(canonical.size()));
    out.labels[ids[static_cast<std::size_t>(i)]] = it->second;
  }
  return out;
}

}  // namespace revaudit::stats
