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

#ifndef SHDPP_SUBSET_SEARCH_H_
#define SHDPP_SUBSET_SEARCH_H_

#include <vector>

#include "shdpp/dpp.h"

namespace shdpp {

// Ground sets larger than this are rejected by exhaustive search.
inline constexpr int kMaxEnumerationSize = 20;

struct SubsetChoice {
  std::vector<int> items;  // ascending positions into the searched kernel
  double log_det = 0.0;
};

// Exhaustive argmax of det(L[s]) over every subset s of {0, ..., n-1}.
// Ties go to the smaller subset, then to the lexicographically smaller index
// list. Subsets with a zero determinant never win against the empty set.
// Throws InputError when n > kMaxEnumerationSize and ModelError when CheckPsd
// rejects the kernel.
SubsetChoice MaximizeSubsetDeterminant(const Matrix& kernel);

// True when (log_det_a, a) should be preferred over (log_det_b, b) under the
// ordering above.
bool PreferSubset(double log_det_a, const std::vector<int>& a,
                  double log_det_b, const std::vector<int>& b);

}  // namespace shdpp

#endif  // SHDPP_SUBSET_SEARCH_H_
