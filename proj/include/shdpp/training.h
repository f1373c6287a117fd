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

// Maximum-likelihood estimation of low-rank kernel factors.
//
// A model is a list of factor matrices B_k; each training example contributes
// conditional-DPP steps whose kernels are Gram matrices (B_k x_i)^T (B_k x_j).
// SH-DPP uses two factors (W for the Z-layer, V for the Y-layer), seqDPP and
// vanilla DPP one. The objective is
//
//   sum_examples log P(labels) - sum_k lambda_k ||B_k||_F^2
//
// and is maximized by full-batch gradient ascent with backtracking.
//
// Gradient of one step: with E = B X^T over the rows X of the items involved,
// d/dB log det(E^T E + M) = 2 E (E^T E + M)^{-1} X for a constant diagonal M.
// A step contributes the numerator term minus the masked-identity denominator
// term.

#ifndef SHDPP_TRAINING_H_
#define SHDPP_TRAINING_H_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "shdpp/model.h"

namespace shdpp {

struct LayerData {
  int factor = 0;  // index into the factor list
  std::shared_ptr<const Matrix> features;
  std::vector<LayerStep> steps;
};

struct TrainingExample {
  std::string video_id;
  std::string query;
  std::vector<LayerData> layers;
};

using Factors = std::vector<Matrix>;

TrainingExample MakeShDppExample(std::shared_ptr<const SequenceFeatures> features,
                                 const Segmentation& segmentation,
                                 const LabeledSummary& labels,
                                 std::string video_id, std::string query);

// Single-layer example over rows of `features`.
TrainingExample MakeSequentialExample(std::shared_ptr<const Matrix> features,
                                      const Segmentation& segmentation,
                                      std::span<const IndexSubset> selections,
                                      bool carryover, std::string video_id,
                                      std::string query);

// Sum of example log-likelihoods (no penalty).
double LogLikelihood(const std::vector<TrainingExample>& examples,
                     const Factors& factors);

double Objective(const std::vector<TrainingExample>& examples,
                 const Factors& factors, const std::vector<double>& lambdas);

struct ObjectiveGradient {
  double value = 0.0;
  Factors gradient;
};

ObjectiveGradient ComputeObjectiveAndGradient(
    const std::vector<TrainingExample>& examples, const Factors& factors,
    const std::vector<double>& lambdas);

double ShDppObjective(const std::vector<TrainingExample>& examples,
                      const KernelFactors& factors, double lambda1,
                      double lambda2);
// (dW, dV).
std::pair<Matrix, Matrix> ShDppGradient(
    const std::vector<TrainingExample>& examples, const KernelFactors& factors,
    double lambda1, double lambda2);

struct TrainConfig {
  double lambda1 = 0.01;
  double lambda2 = 0.01;
  // Candidate values for each lambda. With more than one value, lambdas are
  // picked by leave-one-video-out validation.
  std::vector<double> lambda_grid;
  double step_size = 1e-2;
  int max_iters = 500;
  double rel_tol = 1e-6;
  int restarts = 5;
  double init_sigma = 0.1;
  std::uint64_t seed = 0;

  // Throws InputError on out-of-range values.
  void Validate() const;
};

struct FactorShape {
  int rows = 0;
  int cols = 0;
};

// Gaussian(0, init_sigma^2) entries; deterministic in (seed, restart).
Factors InitialFactors(const std::vector<FactorShape>& shapes,
                       const TrainConfig& config, int restart);

struct AscentResult {
  Factors factors;
  std::vector<double> objective;  // one entry per accepted iterate
  bool converged = false;
};

// Gradient ascent from `init`. Each iteration tries twice the last accepted
// step, halving until the objective does not decrease; stops on max_iters,
// relative change below rel_tol, or when no step is accepted. Throws
// TrainingError when the objective at `init` is not finite.
AscentResult MaximizeObjective(const std::vector<TrainingExample>& examples,
                               Factors init, const std::vector<double>& lambdas,
                               const TrainConfig& config);

struct GridScore {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mean_heldout = 0.0;
};

struct Selection {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<GridScore> scores;
};

// Distinct video ids in order of first appearance.
std::vector<std::string> VideoIds(const std::vector<TrainingExample>& examples);

// Leave-one-video-out mean held-out log-likelihood of a fit from
// InitialFactors(shapes, config, restart).
double LeaveOneVideoOutScore(const std::vector<TrainingExample>& examples,
                             const std::vector<FactorShape>& shapes,
                             const std::vector<double>& lambdas,
                             const TrainConfig& config, int restart);

// Every (lambda1, lambda2) pair from `grid` (lambda1 only for one-factor
// models) scored by LeaveOneVideoOutScore from restart 0. The best mean wins;
// ties go to the larger lambda1 + lambda2. Throws InputError with fewer than
// two videos or an empty grid.
Selection SelectHyperparameters(const std::vector<TrainingExample>& examples,
                                const std::vector<FactorShape>& shapes,
                                const std::vector<double>& grid,
                                const TrainConfig& config);

struct TrainReport {
  Factors factors;
  std::vector<double> objective_trace;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<GridScore> grid_scores;
  // Per restart: validation score (leave-one-video-out mean held-out
  // log-likelihood, or the training objective with a single video), NaN for
  // restarts that diverged.
  std::vector<double> restart_scores;
  int chosen_restart = 0;
};

// Lambda selection, restart selection, then a final fit on all examples.
// Throws TrainingError when every restart diverges.
TrainReport Fit(const std::vector<TrainingExample>& examples,
                const std::vector<FactorShape>& shapes,
                const TrainConfig& config);

}  // namespace shdpp

#endif  // SHDPP_TRAINING_H_
