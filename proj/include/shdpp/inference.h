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

// Online MAP-style inference: each segment's selection is the exhaustive
// argmax of its conditional DPP given the previous segment's selection.
// Also the non-learned baselines.

#ifndef SHDPP_INFERENCE_H_
#define SHDPP_INFERENCE_H_

#include <cstdint>
#include <vector>

#include "shdpp/features.h"
#include "shdpp/model.h"

namespace shdpp {

// argmax over s in ground minus conditioned of P(s | conditioned, ground)
// for the Gram kernel of `factor`. A rank-deficient carryover conditions on
// the span of its embeddings instead of failing. Ties: smaller subsets, then
// lexicographic order.
IndexSubset ArgmaxStep(const Matrix& features, const Matrix& factor,
                       const IndexSubset& conditioned, const IndexSubset& ground);

// z_t* then y_t* for t = 1..T. Segments longer than kMaxEnumerationSize are an
// InputError.
LabeledSummary SummarizeShDpp(const SequenceFeatures& features,
                              const Segmentation& segmentation,
                              const KernelFactors& factors);

// Single-layer chain conditioned on the previous selection.
std::vector<IndexSubset> SummarizeSeqDpp(const Matrix& features,
                                         const Segmentation& segmentation,
                                         const Matrix& w);

// Per-segment argmax without any carryover.
std::vector<IndexSubset> SummarizeVanillaDpp(const Matrix& features,
                                             const Segmentation& segmentation,
                                             const Matrix& w);

IndexSubset Flatten(const std::vector<IndexSubset>& selections);

// k distinct shots uniformly at random from [0, num_shots).
IndexSubset BaselineSampling(int num_shots, int k, std::uint64_t seed);

// Top k shots by the maximum raw (pre-normalization) score over the query's
// concepts; ties go to the earlier shot. `raw_scores` is N x C.
IndexSubset BaselineRanking(const Matrix& raw_scores, const Query& query, int k);

}  // namespace shdpp

#endif  // SHDPP_INFERENCE_H_
