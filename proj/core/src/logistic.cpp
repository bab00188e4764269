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

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "revaudit/error.hpp"
#include "revaudit/stats.hpp"
#include "revaudit/text.hpp"

namespace revaudit::stats {

namespace {

double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

Eigen::VectorXd linear_scores(const Eigen::MatrixXd& x,
                              const Eigen::VectorXd& params) {
  Eigen::VectorXd z = x * params.tail(params.size() - 1);
  z.array() += params(0);
  return z;
}

void check_shapes(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                  const Eigen::VectorXd& params) {
  if (x.rows() != y.size()) {
    throw InvalidArgument("design rows and label count differ");
  }
  if (params.size() != x.cols() + 1) {
    throw InvalidArgument("parameter vector must be [intercept, weights]");
  }
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double penalized_loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& params, double l2) {
  check_shapes(x, y, params);
  const auto z = linear_scores(x, params);
  double nll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    nll += softplus(z(i)) - y(i) * z(i);
  }
  const auto n = static_cast<double>(std::max<Eigen::Index>(x.rows(), 1));
  return nll / n + 0.5 * l2 * params.tail(params.size() - 1).squaredNorm();
}

Eigen::VectorXd penalized_gradient(const Eigen::MatrixXd& x,
                                   const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& params, double l2) {
  check_shapes(x, y, params);
  const auto z = linear_scores(x, params);
  Eigen::VectorXd residual(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) residual(i) = sigmoid(z(i)) - y(i);
  const auto n = static_cast<double>(std::max<Eigen::Index>(x.rows(), 1));
  Eigen::VectorXd g(params.size());
  g(0) = residual.sum() / n;
  g.tail(params.size() - 1) =
      x.transpose() * residual / n + l2 * params.tail(params.size() - 1);
  return g;
}

LogisticModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           std::vector<std::string> columns,
                           const FitOptions& options) {
  if (x.rows() != y.size()) {
    throw InvalidArgument("design rows and label count differ");
  }
  if (x.rows() == 0) throw InvalidArgument("cannot fit on zero rows");
  if (static_cast<Eigen::Index>(columns.size()) != x.cols()) {
    throw InvalidArgument("column names do not match design width");
  }
  if (options.l2 < 0.0) throw InvalidArgument("l2 must be non-negative");
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) {
      throw InvalidArgument("labels must be 0 or 1");
    }
  }

  const Eigen::Index p = x.cols();
  const auto n = static_cast<double>(x.rows());
  Eigen::MatrixXd design(x.rows(), p + 1);
  design.col(0).setOnes();
  design.rightCols(p) = x;

  if (options.l2 == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < p + 1) {
      throw IllPosedError(
          "design matrix (with intercept) is rank-deficient; a positive l2 "
          "penalty is required");
    }
  }

  Eigen::VectorXd params = Eigen::VectorXd::Zero(p + 1);
  LogisticModel model;
  model.columns = std::move(columns);
  model.l2 = options.l2;
  double loss = penalized_loss(x, y, params, options.l2);
  model.convergence.loss_history.push_back(loss);

  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(p + 1, options.l2);
  penalty(0) = 0.0;

  int iter = 0;
  Eigen::VectorXd grad = penalized_gradient(x, y, params, options.l2);
  double grad_norm = grad.norm();
  while (grad_norm > options.tol && iter < options.max_iter) {
    ++iter;
    const Eigen::VectorXd z = design * params;
    Eigen::VectorXd w(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double s = sigmoid(z(i));
      w(i) = s * (1.0 - s);
    }
    Eigen::MatrixXd hessian =
        design.transpose() * w.asDiagonal() * design / n;
    hessian.diagonal() += penalty;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    Eigen::VectorXd step;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      step = -ldlt.solve(grad);
    }
    if (step.size() == 0 || !step.allFinite()) {
      // Saturated curvature; fall back to steepest descent.
      step = -grad;
    }

    const double slope = grad.dot(step);
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double candidate_loss = loss;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      candidate = params + t * step;
      candidate_loss = penalized_loss(x, y, candidate, options.l2);
      if (candidate_loss <= loss + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      // Near the optimum the decrease drops below rounding of the loss;
      // accept a non-increasing step that still shrinks the gradient.
      if (candidate_loss <= loss &&
          penalized_gradient(x, y, candidate, options.l2).norm() < grad_norm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    params = candidate;
    loss = candidate_loss;
    model.convergence.loss_history.push_back(loss);
    grad = penalized_gradient(x, y, params, options.l2);
    grad_norm = grad.norm();
  }

  model.intercept = params(0);
  model.coefficients = params.tail(p);
  model.convergence.iterations = iter;
  model.convergence.gradient_norm = grad_norm;
  if (!(grad_norm <= options.tol)) {
    throw ConvergenceError(
        "logistic regression did not converge after " + std::to_string(iter) +
        " iterations (gradient norm " + text::format_double(grad_norm) + ")");
  }
  return model;
}

Eigen::VectorXd predict_proba(const LogisticModel& model,
                              const Eigen::MatrixXd& x,
                              const std::vector<std::string>& columns) {
  if (columns != model.columns) {
    throw InvalidArgument("predict_proba: columns do not match the model");
  }
  if (x.cols() != model.coefficients.size()) {
    throw InvalidArgument("predict_proba: design width does not match model");
  }
  Eigen::VectorXd z = x * model.coefficients;
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    out(i) = sigmoid(z(i) + model.intercept);
  }
  return out;
}

std::string serialize_model(const LogisticModel& model) {
  std::ostringstream os;
  os << "revaudit-logistic-model 1\n";
  os << "l2 " << text::format_double(model.l2) << '\n';
  os << "intercept " << text::format_double(model.intercept) << '\n';
  os << "iterations " << model.convergence.iterations << '\n';
  os << "gradient_norm " << text::format_double(model.convergence.gradient_norm)
     << '\n';
  os << "columns " << model.columns.size() << '\n';
  for (std::size_t j = 0; j < model.columns.size(); ++j) {
    const auto& name = model.columns[j];
    if (name.find_first_of("\t\n") != std::string::npos) {
      throw InvalidArgument("column names may not contain tabs or newlines");
    }
    os << name << '\t'
       << text::format_double(model.coefficients(static_cast<Eigen::Index>(j)))
       << '\n';
  }
  return os.str();
}

LogisticModel parse_model(const std::string& text_in) {
  std::istringstream is(text_in);
  std::string line;
  auto next = [&](const std::string& what) {
    if (!std::getline(is, line)) {
      throw Error("model file truncated while reading " + what);
    }
    return line;
  };
  if (next("header") != "revaudit-logistic-model 1") {
    throw Error("not a revaudit logistic model file");
  }
  auto field = [&](const std::string& key) {
    const auto l = next(key);
    if (l.rfind(key + " ", 0) != 0) throw Error("expected '" + key + "'");
    return l.substr(key.size() + 1);
  };
  auto number = [](const std::string& s, const std::string& key) {
    const auto v = text::parse_double(s);
    if (!v) throw Error("bad number for '" + key + "'");
    return *v;
  };
  LogisticModel m;
  m.l2 = number(field("l2"), "l2");
  m.intercept = number(field("intercept"), "intercept");
  const auto iters = text::parse_int(field("iterations"));
  if (!iters) throw Error("bad iterations");
  m.convergence.iterations = static_cast<int>(*iters);
  m.convergence.gradient_norm =
      number(field("gradient_norm"), "gradient_norm");
  const auto count = text::parse_int(field("columns"));
  if (!count || *count < 0) throw Error("bad column count");
  m.coefficients.resize(*count);
  for (long long j = 0; j < *count; ++j) {
    const auto l = next("coefficient");
    const auto tab = l.rfind('\t');
    if (tab == std::string::npos) throw Error("bad coefficient line");
    m.columns.push_back(l.substr(0, tab));
    m.coefficients(j) = number(l.substr(tab + 1), "coefficient");
  }
  return m;
}

void save_model(const LogisticModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_model(model);
}

LogisticModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace revaudit::stats
