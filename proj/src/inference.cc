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

#include "shdpp/inference.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "shdpp/errors.h"
#include "shdpp/subset_search.h"

namespace shdpp {
namespace {

std::vector<IndexSubset> SummarizeChain(const Matrix& features,
                                        const Segmentation& segmentation,
                                        const Matrix& w, bool carryover) {
  std::vector<IndexSubset> out;
  IndexSubset previous;
  for (const IndexSubset& segment : segmentation.segments) {
    out.push_back(ArgmaxStep(features, w, carryover ? previous : IndexSubset(),
                             segment));
    previous = out.back();
  }
  return out;
}

}  // namespace

IndexSubset ArgmaxStep(const Matrix& features, const Matrix& factor,
                       const IndexSubset& conditioned,
                       const IndexSubset& ground) {
  const IndexSubset active = Difference(ground, conditioned);
  if (active.size() > kMaxEnumerationSize) {
    throw InputError("segment of " + std::to_string(active.size()) +
                     " shots exceeds the exhaustive-search limit of " +
                     std::to_string(kMaxEnumerationSize));
  }
  // Embeddings factor * x_i as columns.
  auto embed = [&](const IndexSubset& items) {
    Matrix e(factor.rows(), items.size());
    for (int k = 0; k < items.size(); ++k) {
      e.col(k) = factor * features.row(items[k]).transpose();
    }
    return e;
  };
  Matrix residual = embed(active);
  if (!conditioned.empty()) {
    // Conditioning on c leaves the L-ensemble whose kernel is the Schur
    // complement of L[c]; for a Gram kernel that is the Gram matrix of the
    // active embeddings projected off span(c). A rank-deficient c conditions
    // on its span.
    const Eigen::ColPivHouseholderQR<Matrix> qr(embed(conditioned));
    const Matrix q = qr.householderQ();
    const Matrix basis = q.leftCols(qr.rank());
    residual -= basis * (basis.transpose() * residual);
  }
  Matrix schur = residual.transpose() * residual;
  schur = (0.5 * (schur + schur.transpose())).eval();
  const SubsetChoice best = MaximizeSubsetDeterminant(schur);
  std::vector<int> ids;
  for (int pos : best.items) ids.push_back(active[pos]);
  return IndexSubset(std::move(ids));
}

LabeledSummary SummarizeShDpp(const SequenceFeatures& features,
                              const Segmentation& segmentation,
                              const KernelFactors& factors) {
  factors.Validate(features.concept_dim());
  LabeledSummary out;
  IndexSubset z_prev, y_prev;
  for (const IndexSubset& segment : segmentation.segments) {
    StepLabels step;
    step.z = ArgmaxStep(features.query_features, factors.w, z_prev, segment);
    step.y = ArgmaxStep(features.full_features, factors.v,
                        Union(y_prev, step.z), segment);
    z_prev = step.z;
    y_prev = step.y;
    out.steps.push_back(std::move(step));
  }
  return out;
}

std::vector<IndexSubset> SummarizeSeqDpp(const Matrix& features,
                                         const Segmentation& segmentation,
                                         const Matrix& w) {
  return SummarizeChain(features, segmentation, w, true);
}

std::vector<IndexSubset> SummarizeVanillaDpp(const Matrix& features,
                                             const Segmentation& segmentation,
                                             const Matrix& w) {
  return SummarizeChain(features, segmentation, w, false);
}

IndexSubset Flatten(const std::vector<IndexSubset>& selections) {
  std::vector<int> ids;
  for (const IndexSubset& s : selections) ids.insert(ids.end(), s.begin(), s.end());
  return IndexSubset::FromUnsorted(std::move(ids));
}

IndexSubset BaselineSampling(int num_shots, int k, std::uint64_t seed) {
  if (k < 0 || k > num_shots) {
    throw InputError("cannot sample " + std::to_string(k) + " of " +
                     std::to_string(num_shots) + " shots");
  }
  // Partial Fisher-Yates.
  std::vector<int> ids(num_shots);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, num_shots - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  ids.resize(k);
  return IndexSubset::FromUnsorted(std::move(ids));
}

IndexSubset BaselineRanking(const Matrix& raw_scores, const Query& query, int k) {
  const int n = static_cast<int>(raw_scores.rows());
  if (k < 0 || k > n) {
    throw InputError("cannot rank " + std::to_string(k) + " of " +
                     std::to_string(n) + " shots");
  }
  std::vector<double> score(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double best = 0.0;
    for (int c : query.concept_ids()) {
      if (c >= raw_scores.cols()) throw InputError("query concept out of range");
      best = std::max(best, raw_scores(i, c));
    }
    score[i] = best;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return score[a] > score[b]; });
  order.resize(k);
  return IndexSubset::FromUnsorted(std::move(order));
}

}  // namespace shdpp
