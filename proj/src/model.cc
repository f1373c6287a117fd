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

#include "shdpp/model.h"

#include <cmath>
#include <limits>
#include <string>

#include "shdpp/errors.h"

namespace shdpp {
namespace {

Matrix GatherRows(const Matrix& features, std::span<const int> items) {
  Matrix rows(static_cast<int>(items.size()), features.cols());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i] < 0 || items[i] >= features.rows()) {
      throw InputError("shot id " + std::to_string(items[i]) +
                       " out of range");
    }
    rows.row(static_cast<int>(i)) = features.row(items[i]);
  }
  return rows;
}

void CheckFactor(const Matrix& features, const Matrix& factor) {
  if (features.cols() != factor.cols()) {
    throw ModelError("factor has " + std::to_string(factor.cols()) +
                     " columns but features have " +
                     std::to_string(features.cols()));
  }
}

std::vector<int> Concat(const IndexSubset& a, const IndexSubset& b) {
  std::vector<int> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// log det of (E^T E + mask) for E = factor * rows^T, optionally adding the
// gradient `sign * 2 E A^{-1} rows` to `gradient`.
double GramLogDet(const Matrix& rows, const Matrix& factor, int masked_from,
                  PivotPolicy policy, double sign, Matrix* gradient) {
  if (rows.rows() == 0) return 0.0;
  const Matrix embedding = factor * rows.transpose();
  Matrix a = embedding.transpose() * embedding;
  a = (0.5 * (a + a.transpose())).eval();
  for (int i = masked_from; i < a.rows(); ++i) a(i, i) += 1.0;
  const CholeskyFactor f = FactorizePsd(a, policy);
  if (gradient != nullptr && !f.singular) {
    const auto lower = f.lower.triangularView<Eigen::Lower>();
    const Matrix p = lower.solve(embedding.transpose());
    const Matrix q = lower.solve(rows);
    gradient->noalias() += (2.0 * sign) * p.transpose() * q;
  }
  return f.log_det;
}

double EvaluateStep(const Matrix& features, const Matrix& factor,
                    const LayerStep& step, PivotPolicy policy,
                    Matrix* gradient) {
  CheckFactor(features, factor);
  const IndexSubset active = Difference(step.ground, step.conditioned);
  if (!IsSubset(step.selected, active)) {
    throw InputError("selected set " + step.selected.ToString() +
                     " is not inside the selectable ground set " +
                     active.ToString());
  }
  const Matrix den_rows = GatherRows(features, Concat(step.conditioned, active));
  const double log_den = GramLogDet(den_rows, factor, step.conditioned.size(),
                                    policy, -1.0, gradient);
  if (log_den == -std::numeric_limits<double>::infinity()) {
    throw NullEventError("conditioning set " + step.conditioned.ToString() +
                         " has probability zero");
  }
  const Matrix num_rows =
      GatherRows(features, Concat(step.conditioned, step.selected));
  const double log_num = GramLogDet(num_rows, factor,
                                    static_cast<int>(num_rows.rows()), policy,
                                    1.0, gradient);
  if (log_num == -std::numeric_limits<double>::infinity()) return log_num;
  return log_num - log_den;
}

}  // namespace

Segmentation SegmentStream(int num_shots, int segment_size) {
  if (num_shots < 0) throw InputError("negative shot count");
  if (segment_size < 1) throw InputError("segment size must be positive");
  Segmentation s;
  s.segment_size = segment_size;
  s.num_shots = num_shots;
  for (int start = 0; start < num_shots; start += segment_size) {
    std::vector<int> ids;
    for (int i = start; i < std::min(num_shots, start + segment_size); ++i) {
      ids.push_back(i);
    }
    s.segments.emplace_back(std::move(ids));
  }
  return s;
}

void KernelFactors::Validate(int concept_dim) const {
  if (w.rows() < 1 || w.rows() != v.rows()) {
    throw ModelError("W and V need the same positive rank");
  }
  if (w.cols() != concept_dim || v.cols() != concept_dim + kContextDim) {
    throw ModelError("factor column counts do not match the feature sizes");
  }
  if (!w.allFinite() || !v.allFinite()) {
    throw ModelError("factors have non-finite entries");
  }
}

IndexSubset LabeledSummary::ZShots() const {
  std::vector<int> ids;
  for (const StepLabels& s : steps) ids.insert(ids.end(), s.z.begin(), s.z.end());
  return IndexSubset::FromUnsorted(std::move(ids));
}

IndexSubset LabeledSummary::AllShots() const {
  std::vector<int> ids;
  for (const StepLabels& s : steps) {
    ids.insert(ids.end(), s.z.begin(), s.z.end());
    ids.insert(ids.end(), s.y.begin(), s.y.end());
  }
  return IndexSubset::FromUnsorted(std::move(ids));
}

void ValidateLabels(const Segmentation& segmentation,
                    const LabeledSummary& labels) {
  if (labels.steps.size() != segmentation.segments.size()) {
    throw InputError("labels have " + std::to_string(labels.steps.size()) +
                     " steps for " + std::to_string(segmentation.size()) +
                     " segments");
  }
  for (int t = 0; t < segmentation.size(); ++t) {
    const IndexSubset& ground = segmentation.segments[t];
    const StepLabels& step = labels.steps[t];
    if (!IsSubset(step.z, ground)) {
      throw InputError("z at step " + std::to_string(t) +
                       " is not inside its segment");
    }
    if (!IsSubset(step.y, Difference(ground, step.z))) {
      throw InputError("y at step " + std::to_string(t) +
                       " is not inside its segment minus z");
    }
  }
}

SequenceFeatures BuildSequenceFeatures(std::span<const ShotFeatures> shots,
                                       const Query& query,
                                       const Lexicon& lexicon,
                                       QueryFeatureOptions options) {
  const int n = static_cast<int>(shots.size());
  SequenceFeatures out;
  out.query_features.resize(n, lexicon.size());
  out.full_features.resize(n, lexicon.size() + kContextDim);
  for (int i = 0; i < n; ++i) {
    out.query_features.row(i) =
        QueryFeature(shots[i], query, lexicon, options).transpose();
    out.full_features.row(i) = ShotFeatureVector(shots[i]).transpose();
  }
  return out;
}

Kernel GramKernel(const Matrix& features, const Matrix& factor,
                  std::span<const int> items) {
  CheckFactor(features, factor);
  return Kernel::FromEmbedding(factor *
                               GatherRows(features, items).transpose());
}

Kernel ZKernel(const SequenceFeatures& features, const IndexSubset& segment,
               const IndexSubset& carryover, const KernelFactors& factors) {
  return GramKernel(features.query_features, factors.w,
                    Concat(carryover, segment));
}

Kernel YKernel(const SequenceFeatures& features, const IndexSubset& segment,
               const IndexSubset& carryover, const KernelFactors& factors) {
  return GramKernel(features.full_features, factors.v,
                    Concat(carryover, segment));
}

std::vector<LayerStep> ZLayerSteps(const Segmentation& segmentation,
                                   const LabeledSummary& labels) {
  ValidateLabels(segmentation, labels);
  std::vector<LayerStep> steps;
  IndexSubset previous;
  for (int t = 0; t < segmentation.size(); ++t) {
    steps.push_back({previous, segmentation.segments[t], labels.steps[t].z});
    previous = labels.steps[t].z;
  }
  return steps;
}

std::vector<LayerStep> YLayerSteps(const Segmentation& segmentation,
                                   const LabeledSummary& labels) {
  ValidateLabels(segmentation, labels);
  std::vector<LayerStep> steps;
  IndexSubset previous;
  for (int t = 0; t < segmentation.size(); ++t) {
    const StepLabels& s = labels.steps[t];
    steps.push_back({Union(previous, s.z), segmentation.segments[t], s.y});
    previous = s.y;
  }
  return steps;
}

std::vector<LayerStep> SequentialSteps(const Segmentation& segmentation,
                                       std::span<const IndexSubset> selections,
                                       bool carryover) {
  if (selections.size() != segmentation.segments.size()) {
    throw InputError("one selection per segment is required");
  }
  std::vector<LayerStep> steps;
  IndexSubset previous;
  for (int t = 0; t < segmentation.size(); ++t) {
    if (!IsSubset(selections[t], segmentation.segments[t])) {
      throw InputError("selection at step " + std::to_string(t) +
                       " is not inside its segment");
    }
    steps.push_back({carryover ? previous : IndexSubset(),
                     segmentation.segments[t], selections[t]});
    previous = selections[t];
  }
  return steps;
}

double LayerStepLogProbability(const Matrix& features, const Matrix& factor,
                               const LayerStep& step, PivotPolicy policy) {
  return EvaluateStep(features, factor, step, policy, nullptr);
}

double LayerStepLogProbabilityAndGradient(const Matrix& features,
                                          const Matrix& factor,
                                          const LayerStep& step,
                                          Matrix* gradient) {
  return EvaluateStep(features, factor, step, PivotPolicy::kJitter, gradient);
}

double ShDppLogLikelihood(const SequenceFeatures& features,
                          const Segmentation& segmentation,
                          const LabeledSummary& labels,
                          const KernelFactors& factors) {
  factors.Validate(features.concept_dim());
  double total = 0.0;
  for (const LayerStep& s : ZLayerSteps(segmentation, labels)) {
    total += LayerStepLogProbability(features.query_features, factors.w, s);
  }
  for (const LayerStep& s : YLayerSteps(segmentation, labels)) {
    total += LayerStepLogProbability(features.full_features, factors.v, s);
  }
  return total;
}

const Matrix& SelectFeatures(const SequenceFeatures& features,
                             SeqFeatures which) {
  return which == SeqFeatures::kQueryScaled ? features.query_features
                                            : features.full_features;
}

double SeqDppLogLikelihood(const Matrix& features,
                           const Segmentation& segmentation,
                           std::span<const IndexSubset> selections,
                           const Matrix& w, bool carryover) {
  double total = 0.0;
  for (const LayerStep& s : SequentialSteps(segmentation, selections, carryover)) {
    total += LayerStepLogProbability(features, w, s);
  }
  return total;
}

}  // namespace shdpp
