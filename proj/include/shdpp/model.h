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

// Sequential DPP models over a segmented shot stream.
//
// The stream is cut into consecutive ground sets Y_1..Y_T. A sequential model
// is a product of conditional DPPs, one per segment, each conditioned on the
// previous segment's selection. SH-DPP stacks two such chains:
//
//   Z-layer  P(z_t | q, z_{t-1}, Y_t)      kernel (W f_i(q))^T (W f_j(q))
//   Y-layer  P(y_t | y_{t-1}, z_t, Y_t)    kernel (V f_i)^T (V f_j)
//
// where the Y-layer treats z_t as already chosen, so it can only add shots
// from Y_t minus z_t. All indices here are global shot ids.

#ifndef SHDPP_MODEL_H_
#define SHDPP_MODEL_H_

#include <span>
#include <vector>

#include "shdpp/dpp.h"
#include "shdpp/features.h"

namespace shdpp {

inline constexpr int kDefaultSegmentSize = 10;
inline constexpr int kDefaultRank = 10;

struct Segmentation {
  std::vector<IndexSubset> segments;
  int segment_size = kDefaultSegmentSize;
  int num_shots = 0;

  int size() const { return static_cast<int>(segments.size()); }
};

// Consecutive ground sets of `segment_size` shots; a shorter trailing segment
// is kept.
Segmentation SegmentStream(int num_shots, int segment_size);

struct KernelFactors {
  Matrix w;  // rank x C, Z-layer
  Matrix v;  // rank x (C + kContextDim), Y-layer

  int rank() const { return static_cast<int>(w.rows()); }
  // Throws ModelError on non-finite entries, mismatched ranks, or column
  // counts other than (concept_dim, concept_dim + kContextDim).
  void Validate(int concept_dim) const;
};

struct StepLabels {
  IndexSubset z;
  IndexSubset y;
};

struct LabeledSummary {
  std::vector<StepLabels> steps;

  // Union of all z_t, and of all z_t and y_t.
  IndexSubset ZShots() const;
  IndexSubset AllShots() const;
};

// Throws InputError unless there is one step per segment, z_t lies in Y_t
// and y_t lies in Y_t minus z_t.
void ValidateLabels(const Segmentation& segmentation,
                    const LabeledSummary& labels);

// Per-shot feature rows for one (video, query) pair.
struct SequenceFeatures {
  Matrix query_features;  // N x C, rows f_i(q)
  Matrix full_features;   // N x (C + kContextDim), rows f_i

  int num_shots() const { return static_cast<int>(full_features.rows()); }
  int concept_dim() const { return static_cast<int>(query_features.cols()); }
};

SequenceFeatures BuildSequenceFeatures(std::span<const ShotFeatures> shots,
                                       const Query& query,
                                       const Lexicon& lexicon,
                                       QueryFeatureOptions options = {});

// Gram kernel (factor x_i)^T (factor x_j) over `items` in the order given.
Kernel GramKernel(const Matrix& features, const Matrix& factor,
                  std::span<const int> items);

// Z-layer kernel over carryover followed by the segment's shots.
Kernel ZKernel(const SequenceFeatures& features, const IndexSubset& segment,
               const IndexSubset& carryover, const KernelFactors& factors);
// Y-layer kernel over carryover followed by the segment's shots.
Kernel YKernel(const SequenceFeatures& features, const IndexSubset& segment,
               const IndexSubset& carryover, const KernelFactors& factors);

// One conditional-DPP factor: P(selected | conditioned, ground).
struct LayerStep {
  IndexSubset conditioned;
  IndexSubset ground;
  IndexSubset selected;
};

std::vector<LayerStep> ZLayerSteps(const Segmentation& segmentation,
                                   const LabeledSummary& labels);
std::vector<LayerStep> YLayerSteps(const Segmentation& segmentation,
                                   const LabeledSummary& labels);
// Single-layer chain. Without carryover every step is an independent DPP.
std::vector<LayerStep> SequentialSteps(const Segmentation& segmentation,
                                       std::span<const IndexSubset> selections,
                                       bool carryover);

// log P(step) under the Gram kernel of `factor` on rows of `features`.
double LayerStepLogProbability(const Matrix& features, const Matrix& factor,
                               const LayerStep& step,
                               PivotPolicy policy = PivotPolicy::kJitter);

// As above under PivotPolicy::kJitter, adding d log P / d factor into
// `gradient` (same shape as `factor`).
double LayerStepLogProbabilityAndGradient(const Matrix& features,
                                          const Matrix& factor,
                                          const LayerStep& step,
                                          Matrix* gradient);

// Sum over segments of the Z-layer and Y-layer conditional log
// probabilities, with z_0 = y_0 = empty. Uses PivotPolicy::kJitter so the
// value stays finite for rank-deficient label sets.
double ShDppLogLikelihood(const SequenceFeatures& features,
                          const Segmentation& segmentation,
                          const LabeledSummary& labels,
                          const KernelFactors& factors);

// Which feature rows a single-layer (seqDPP / vanilla DPP) kernel uses.
enum class SeqFeatures { kQueryScaled, kFull };

const Matrix& SelectFeatures(const SequenceFeatures& features,
                             SeqFeatures which);

double SeqDppLogLikelihood(const Matrix& features,
                           const Segmentation& segmentation,
                           std::span<const IndexSubset> selections,
                           const Matrix& w, bool carryover = true);

}  // namespace shdpp

#endif  // SHDPP_MODEL_H_
