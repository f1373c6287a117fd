// Copyright 2026 The SH-DPP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shdpp/training.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "shdpp/errors.h"
#include "shdpp/parallel.h"

namespace shdpp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Log-likelihood of one example, optionally accumulating per-factor
// gradients. Numerical failures are rethrown with the offending location.
double ExampleLogLikelihood(const TrainingExample& example,
                            const Factors& factors, Factors* gradient) {
  double total = 0.0;
  for (std::size_t l = 0; l < example.layers.size(); ++l) {
    const LayerData& layer = example.layers[l];
    const Matrix& factor = factors.at(layer.factor);
    for (std::size_t t = 0; t < layer.steps.size(); ++t) {
      try {
        total += gradient == nullptr
                     ? LayerStepLogProbability(*layer.features, factor,
                                               layer.steps[t])
                     : LayerStepLogProbabilityAndGradient(
                           *layer.features, factor, layer.steps[t],
                           &(*gradient)[layer.factor]);
      } catch (const ModelError& e) {
        throw TrainingError("video " + example.video_id + ", query " +
                            example.query + ", layer " + std::to_string(l) +
                            ", step " + std::to_string(t) + ": " + e.what());
      }
    }
  }
  return total;
}

double Penalty(const Factors& factors, const std::vector<double>& lambdas) {
  double p = 0.0;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    p += lambdas.at(k) * factors[k].squaredNorm();
  }
  return p;
}

Factors ZerosLike(const Factors& factors) {
  Factors out;
  for (const Matrix& f : factors) out.push_back(Matrix::Zero(f.rows(), f.cols()));
  return out;
}

std::vector<double> LambdasFor(std::size_t num_factors, double lambda1,
                               double lambda2) {
  std::vector<double> l{lambda1, lambda2};
  l.resize(num_factors, lambda2);
  return l;
}

void Split(const std::vector<TrainingExample>& examples,
           const std::string& held_out, std::vector<TrainingExample>* train,
           std::vector<TrainingExample>* test) {
  for (const TrainingExample& e : examples) {
    (e.video_id == held_out ? test : train)->push_back(e);
  }
}

}  // namespace

TrainingExample MakeShDppExample(std::shared_ptr<const SequenceFeatures> features,
                                 const Segmentation& segmentation,
                                 const LabeledSummary& labels,
                                 std::string video_id, std::string query) {
  TrainingExample ex;
  ex.video_id = std::move(video_id);
  ex.query = std::move(query);
  ex.layers.push_back(
      {0, std::shared_ptr<const Matrix>(features, &features->query_features),
       ZLayerSteps(segmentation, labels)});
  ex.layers.push_back(
      {1, std::shared_ptr<const Matrix>(features, &features->full_features),
       YLayerSteps(segmentation, labels)});
  return ex;
}

TrainingExample MakeSequentialExample(std::shared_ptr<const Matrix> features,
                                      const Segmentation& segmentation,
                                      std::span<const IndexSubset> selections,
                                      bool carryover, std::string video_id,
                                      std::string query) {
  TrainingExample ex;
  ex.video_id = std::move(video_id);
  ex.query = std::move(query);
  ex.layers.push_back({0, std::move(features),
                       SequentialSteps(segmentation, selections, carryover)});
  return ex;
}

double LogLikelihood(const std::vector<TrainingExample>& examples,
                     const Factors& factors) {
  std::vector<double> parts(examples.size());
  ParallelFor(static_cast<int>(examples.size()), [&](int i) {
    parts[i] = ExampleLogLikelihood(examples[i], factors, nullptr);
  });
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

double Objective(const std::vector<TrainingExample>& examples,
                 const Factors& factors, const std::vector<double>& lambdas) {
  if (examples.empty()) throw InputError("training set is empty");
  return LogLikelihood(examples, factors) - Penalty(factors, lambdas);
}

ObjectiveGradient ComputeObjectiveAndGradient(
    const std::vector<TrainingExample>& examples, const Factors& factors,
    const std::vector<double>& lambdas) {
  if (examples.empty()) throw InputError("training set is empty");
  std::vector<double> parts(examples.size());
  std::vector<Factors> grads(examples.size());
  ParallelFor(static_cast<int>(examples.size()), [&](int i) {
    grads[i] = ZerosLike(factors);
    parts[i] = ExampleLogLikelihood(examples[i], factors, &grads[i]);
  });
  ObjectiveGradient out;
  out.gradient = ZerosLike(factors);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    out.value += parts[i];
    for (std::size_t k = 0; k < factors.size(); ++k) {
      out.gradient[k] += grads[i][k];
    }
  }
  out.value -= Penalty(factors, lambdas);
  for (std::size_t k = 0; k < factors.size(); ++k) {
    out.gradient[k] -= 2.0 * lambdas.at(k) * factors[k];
  }
  return out;
}

double ShDppObjective(const std::vector<TrainingExample>& examples,
                      const KernelFactors& factors, double lambda1,
                      double lambda2) {
  return Objective(examples, {factors.w, factors.v}, {lambda1, lambda2});
}

std::pair<Matrix, Matrix> ShDppGradient(
    const std::vector<TrainingExample>& examples, const KernelFactors& factors,
    double lambda1, double lambda2) {
  ObjectiveGradient g = ComputeObjectiveAndGradient(
      examples, {factors.w, factors.v}, {lambda1, lambda2});
  return {std::move(g.gradient[0]), std::move(g.gradient[1])};
}

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) { throw InputError(what); };
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) fail("lambdas must be >= 0");
  for (double l : lambda_grid) {
    if (!(l >= 0.0)) fail("lambda grid values must be >= 0");
  }
  if (!(step_size > 0.0)) fail("step size must be positive");
  if (max_iters < 0) fail("max_iters must be >= 0");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) fail("rel_tol must be in (0, 1)");
  if (restarts < 1) fail("restarts must be >= 1");
  if (!(init_sigma > 0.0)) fail("init_sigma must be positive");
}

Factors InitialFactors(const std::vector<FactorShape>& shapes,
                       const TrainConfig& config, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, config.init_sigma);
  Factors out;
  for (const FactorShape& s : shapes) {
    Matrix m(s.rows, s.cols);
    for (int i = 0; i < s.rows; ++i) {
      for (int j = 0; j < s.cols; ++j) m(i, j) = normal(rng);
    }
    out.push_back(std::move(m));
  }
  return out;
}

namespace {
constexpr double kArmijo = 1e-4;
}  // namespace

AscentResult MaximizeObjective(const std::vector<TrainingExample>& examples,
                               Factors init, const std::vector<double>& lambdas,
                               const TrainConfig& config) {
  AscentResult r;
  r.factors = std::move(init);
  ObjectiveGradient current =
      ComputeObjectiveAndGradient(examples, r.factors, lambdas);
  if (!std::isfinite(current.value)) {
    throw TrainingError("objective is not finite at the initial point");
  }
  r.objective.push_back(current.value);
  double step = config.step_size;

  for (int iter = 0; iter < config.max_iters; ++iter) {
    double grad_norm = 0.0;
    double param_norm = 0.0;
    for (std::size_t k = 0; k < r.factors.size(); ++k) {
      grad_norm += current.gradient[k].squaredNorm();
      param_norm += r.factors[k].squaredNorm();
    }
    grad_norm = std::sqrt(grad_norm);
    param_norm = std::sqrt(param_norm);

    bool accepted = false;
    Factors trial;
    double trial_value = 0.0;
    for (double s = step; s * grad_norm > 1e-12 * (1.0 + param_norm); s *= 0.5) {
      trial = r.factors;
      for (std::size_t k = 0; k < trial.size(); ++k) {
        trial[k] += s * current.gradient[k];
      }
      try {
        trial_value = Objective(examples, trial, lambdas);
      } catch (const TrainingError&) {
        // Numerically broken trial point: shrink the step.
        trial_value = -std::numeric_limits<double>::infinity();
      }
      // Sufficient increase (Armijo); plain non-decrease also accepts
      // overshoots across a ridge that gain almost nothing.
      if (std::isfinite(trial_value) &&
          trial_value >= current.value + kArmijo * s * grad_norm * grad_norm) {
        accepted = true;
        step = 2.0 * s;
        break;
      }
    }
    if (!accepted) {
      r.converged = true;
      break;
    }
    const double change = std::abs(trial_value - current.value) /
                          std::max(1.0, std::abs(current.value));
    r.factors = std::move(trial);
    r.objective.push_back(trial_value);
    if (change < config.rel_tol) {
      r.converged = true;
      break;
    }
    current = ComputeObjectiveAndGradient(examples, r.factors, lambdas);
  }
  return r;
}

std::vector<std::string> VideoIds(const std::vector<TrainingExample>& examples) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const TrainingExample& e : examples) {
    if (seen.insert(e.video_id).second) ids.push_back(e.video_id);
  }
  return ids;
}

double LeaveOneVideoOutScore(const std::vector<TrainingExample>& examples,
                             const std::vector<FactorShape>& shapes,
                             const std::vector<double>& lambdas,
                             const TrainConfig& config, int restart) {
  const std::vector<std::string> videos = VideoIds(examples);
  if (videos.size() < 2) {
    throw InputError("leave-one-video-out needs at least two videos");
  }
  double total = 0.0;
  for (const std::string& held_out : videos) {
    std::vector<TrainingExample> train, test;
    Split(examples, held_out, &train, &test);
    const AscentResult fit = MaximizeObjective(
        train, InitialFactors(shapes, config, restart), lambdas, config);
    total += LogLikelihood(test, fit.factors);
  }
  return total / static_cast<double>(videos.size());
}

Selection SelectHyperparameters(const std::vector<TrainingExample>& examples,
                                const std::vector<FactorShape>& shapes,
                                const std::vector<double>& grid,
                                const TrainConfig& config) {
  if (grid.empty()) throw InputError("lambda grid is empty");
  std::vector<std::pair<double, double>> points;
  for (double l1 : grid) {
    if (shapes.size() < 2) {
      points.emplace_back(l1, 0.0);
      continue;
    }
    for (double l2 : grid) points.emplace_back(l1, l2);
  }
  Selection sel;
  bool have_best = false;
  double best = 0.0;
  for (const auto& [l1, l2] : points) {
    double score = kNaN;
    if (points.size() == 1) {
      score = 0.0;
    } else {
      try {
        score = LeaveOneVideoOutScore(
            examples, shapes, LambdasFor(shapes.size(), l1, l2), config, 0);
      } catch (const TrainingError&) {
        score = kNaN;
      }
    }
    sel.scores.push_back({l1, l2, score});
    if (!std::isfinite(score)) continue;
    const bool better =
        !have_best || score > best ||
        (score == best && l1 + l2 > sel.lambda1 + sel.lambda2);
    if (better) {
      have_best = true;
      best = score;
      sel.lambda1 = l1;
      sel.lambda2 = l2;
    }
  }
  if (!have_best) {
    throw TrainingError("every lambda grid point diverged");
  }
  return sel;
}

TrainReport Fit(const std::vector<TrainingExample>& examples,
                const std::vector<FactorShape>& shapes,
                const TrainConfig& config) {
  config.Validate();
  if (examples.empty()) throw InputError("training set is empty");
  const std::size_t num_videos = VideoIds(examples).size();

  TrainReport report;
  report.lambda1 = config.lambda1;
  report.lambda2 = config.lambda2;
  if (config.lambda_grid.size() == 1) {
    report.lambda1 = report.lambda2 = config.lambda_grid.front();
  } else if (config.lambda_grid.size() > 1) {
    Selection sel =
        SelectHyperparameters(examples, shapes, config.lambda_grid, config);
    report.lambda1 = sel.lambda1;
    report.lambda2 = sel.lambda2;
    report.grid_scores = std::move(sel.scores);
  }
  const std::vector<double> lambdas =
      LambdasFor(shapes.size(), report.lambda1, report.lambda2);

  // Restart selection. With a single video there is nothing to hold out, so
  // the training objective of each full fit decides.
  bool have_best = false;
  double best = 0.0;
  AscentResult best_fit;
  for (int r = 0; r < config.restarts; ++r) {
    double score = kNaN;
    AscentResult fit;
    try {
      if (num_videos >= 2 && config.restarts > 1) {
        score = LeaveOneVideoOutScore(examples, shapes, lambdas, config, r);
      } else {
        fit = MaximizeObjective(examples, InitialFactors(shapes, config, r),
                                lambdas, config);
        score = fit.objective.back();
      }
    } catch (const TrainingError&) {
      score = kNaN;
    }
    report.restart_scores.push_back(score);
    if (std::isfinite(score) && (!have_best || score > best)) {
      have_best = true;
      best = score;
      report.chosen_restart = r;
      best_fit = std::move(fit);
    }
  }
  if (!have_best) throw TrainingError("all restarts diverged");

  if (best_fit.factors.empty()) {
    best_fit = MaximizeObjective(
        examples, InitialFactors(shapes, config, report.chosen_restart),
        lambdas, config);
  }
  report.factors = std::move(best_fit.factors);
  report.objective_trace = std::move(best_fit.objective);
  return report;
}

}  // namespace shdpp
