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

// Random SH-DPP training instances shared by the training test and the
// acceptance suite.

#ifndef SHDPP_TESTS_INSTANCES_H_
#define SHDPP_TESTS_INSTANCES_H_

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "oracles.h"
#include "shdpp/training.h"

namespace shdpp::testing {

struct RandomShDppProblem {
  std::vector<TrainingExample> examples;
  KernelFactors factors;
};

// `videos` examples with T segments of `per_segment` shots, C concepts and
// rank d. Labels are drawn so that every numerator set has at most `rank`
// items, which keeps every determinant away from the jitter regime.
inline RandomShDppProblem MakeRandomShDppProblem(std::mt19937_64& rng, int videos,
                                                 int segments, int per_segment,
                                                 int concepts, int rank) {
  RandomShDppProblem p;
  p.factors.w = GaussianMatrix(rank, concepts, rng, 0.8);
  p.factors.v = GaussianMatrix(rank, concepts + kContextDim, rng, 0.8);
  const int n = segments * per_segment;
  const Segmentation seg = SegmentStream(n, per_segment);
  std::uniform_int_distribution<int> coin(0, 2);
  for (int v = 0; v < videos; ++v) {
    auto features = std::make_shared<SequenceFeatures>();
    features->query_features = GaussianMatrix(n, concepts, rng, 0.6);
    features->full_features = GaussianMatrix(n, concepts + kContextDim, rng, 0.6);
    LabeledSummary labels;
    for (;;) {
      labels.steps.clear();
      IndexSubset z_prev, y_prev;
      bool ok = true;
      for (const IndexSubset& segment : seg.segments) {
        std::vector<int> z, y;
        for (int i : segment) {
          const int c = coin(rng);
          if (c == 1) z.push_back(i);
          if (c == 2) y.push_back(i);
        }
        StepLabels s{IndexSubset(z), IndexSubset(y)};
        ok = ok && Union(z_prev, s.z).size() <= rank &&
             Union(Union(y_prev, s.z), s.y).size() <= rank;
        z_prev = s.z;
        y_prev = s.y;
        labels.steps.push_back(s);
      }
      if (ok) break;
    }
    p.examples.push_back(MakeShDppExample(features, seg, labels,
                                          "v" + std::to_string(v), "q"));
  }
  return p;
}

}  // namespace shdpp::testing

#endif  // SHDPP_TESTS_INSTANCES_H_
