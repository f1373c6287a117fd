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

// Scoring a system summary against query-focused groundtruth.

#ifndef SHDPP_EVAL_H_
#define SHDPP_EVAL_H_

#include "shdpp/corpus.h"
#include "shdpp/dpp.h"
#include "shdpp/model.h"
#include "shdpp/rouge.h"

namespace shdpp {

// ROUGE-SU of the time-ordered texts of the system and groundtruth shots.
ScoreTriple SummaryScore(const IndexSubset& system,
                         const GroundtruthSummary& groundtruth,
                         const VideoRecord& video,
                         int skip = kDefaultSkipDistance);

// hr = |S^q hit| / |S^q|, 1 when S^q is empty. hr_z counts only hits made by
// the Z-layer and is meaningful only when `has_z`.
struct HittingRecallReport {
  double hr_overall = 1.0;
  double hr_z = 1.0;
  int relevant = 0;
  int hits = 0;
  int z_hits = 0;
  bool has_z = false;
};

HittingRecallReport HittingRecall(const IndexSubset& system,
                                  const GroundtruthSummary& groundtruth);
HittingRecallReport HittingRecall(const LabeledSummary& system,
                                  const GroundtruthSummary& groundtruth);

}  // namespace shdpp

#endif  // SHDPP_EVAL_H_
