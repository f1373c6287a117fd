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

#include "shdpp/subset_search.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "shdpp/errors.h"

namespace shdpp {

bool PreferSubset(double log_det_a, const std::vector<int>& a,
                  double log_det_b, const std::vector<int>& b) {
  if (log_det_a != log_det_b) return log_det_a > log_det_b;
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

// Depth-first walk over subsets in increasing-index order. Row `depth` of
// `factor_` holds the Cholesky row of the item chosen at that depth, so each
// node costs O(depth^2) instead of a fresh factorization.
class DeterminantSearch {
 public:
  explicit DeterminantSearch(const Matrix& kernel)
      : kernel_(kernel),
        n_(static_cast<int>(kernel.rows())),
        factor_(Matrix::Zero(n_, n_)),
        row_(n_) {}

  SubsetChoice Run() {
    best_.items.clear();
    best_.log_det = 0.0;
    Visit(0, 0, 0.0);
    return best_;
  }

 private:
  void Visit(int start, int depth, double log_det) {
    for (int j = start; j < n_; ++j) {
      double pivot = kernel_(j, j);
      for (int r = 0; r < depth; ++r) {
        double s = kernel_(chosen_[r], j);
        for (int q = 0; q < r; ++q) s -= row_(q) * factor_(r, q);
        row_(r) = s / factor_(r, r);
        pivot -= row_(r) * row_(r);
      }
      // Every superset of a singular set is singular too.
      if (pivot < SingularPivotBound(kernel_(j, j))) continue;

      factor_.row(depth).head(depth) = row_.head(depth);
      factor_(depth, depth) = std::sqrt(pivot);
      chosen_.push_back(j);
      const double value = log_det + std::log(pivot);
      if (PreferSubset(value, chosen_, best_.log_det, best_.items)) {
        best_.items = chosen_;
        best_.log_det = value;
      }
      Visit(j + 1, depth + 1, value);
      chosen_.pop_back();
    }
  }

  const Matrix& kernel_;
  int n_;
  Matrix factor_;
  Vector row_;
  std::vector<int> chosen_;
  SubsetChoice best_;
};

}  // namespace

SubsetChoice MaximizeSubsetDeterminant(const Matrix& kernel) {
  if (kernel.rows() > kMaxEnumerationSize) {
    throw InputError("ground set of size " + std::to_string(kernel.rows()) +
                     " exceeds the exhaustive-search limit of " +
                     std::to_string(kMaxEnumerationSize));
  }
  CheckPsd(kernel);
  return DeterminantSearch(kernel).Run();
}

}  // namespace shdpp
