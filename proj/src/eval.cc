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

#include "shdpp/eval.h"

namespace shdpp {
namespace {

double Ratio(int hits, int total) {
  return total == 0 ? 1.0 : static_cast<double>(hits) / total;
}

}  // namespace

ScoreTriple SummaryScore(const IndexSubset& system,
                         const GroundtruthSummary& groundtruth,
                         const VideoRecord& video, int skip) {
  return RougeSu(SummaryText(video, system),
                 SummaryText(video, groundtruth.shots), skip);
}

HittingRecallReport HittingRecall(const IndexSubset& system,
                                  const GroundtruthSummary& groundtruth) {
  HittingRecallReport r;
  r.relevant = groundtruth.relevant.size();
  r.hits = Intersection(system, groundtruth.relevant).size();
  r.hr_overall = Ratio(r.hits, r.relevant);
  r.hr_z = 0.0;
  return r;
}

HittingRecallReport HittingRecall(const LabeledSummary& system,
                                  const GroundtruthSummary& groundtruth) {
  HittingRecallReport r = HittingRecall(system.AllShots(), groundtruth);
  r.has_z = true;
  r.z_hits = Intersection(system.ZShots(), groundtruth.relevant).size();
  r.hr_z = Ratio(r.z_hits, r.relevant);
  return r;
}

}  // namespace shdpp
