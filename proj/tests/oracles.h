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

// Independent reference computations used only by tests. Nothing here calls
// into the factorization or enumeration code under test.

#ifndef SHDPP_TESTS_ORACLES_H_
#define SHDPP_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "shdpp/dpp.h"

namespace shdpp::testing {

// Determinant by cofactor expansion along the first row.
inline double LaplaceDeterminant(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  double det = 0.0;
  for (int col = 0; col < n; ++col) {
    Matrix minor(n - 1, n - 1);
    for (int i = 1; i < n; ++i) {
      for (int j = 0, mj = 0; j < n; ++j) {
        if (j == col) continue;
        minor(i - 1, mj++) = a(i, j);
      }
    }
    const double sign = (col % 2 == 0) ? 1.0 : -1.0;
    det += sign * a(0, col) * LaplaceDeterminant(minor);
  }
  return det;
}

inline Matrix Principal(const Matrix& a, const std::vector<int>& order) {
  const int k = static_cast<int>(order.size());
  Matrix sub(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) sub(i, j) = a(order[i], order[j]);
  }
  return sub;
}

inline Matrix GaussianMatrix(int rows, int cols, std::mt19937_64& rng,
                             double sigma = 1.0) {
  std::normal_distribution<double> normal(0.0, sigma);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

// Random PSD kernel B^T B with B of shape rank x n.
inline Kernel RandomKernel(int n, int rank, std::mt19937_64& rng,
                           double sigma = 1.0) {
  return Kernel::FromEmbedding(GaussianMatrix(rank, n, rng, sigma));
}

// All subsets of `universe`, in mask order.
inline std::vector<IndexSubset> AllSubsets(const std::vector<int>& universe) {
  std::vector<IndexSubset> out;
  const std::uint64_t count = std::uint64_t{1} << universe.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    out.push_back(IndexSubset::FromMask(mask, universe));
  }
  return out;
}

inline std::vector<int> Iota(int begin, int end) {
  std::vector<int> v;
  for (int i = begin; i < end; ++i) v.push_back(i);
  return v;
}


inline double LuDeterminant(const Matrix& a) {
  if (a.rows() == 0) return 1.0;
  return a.fullPivLu().determinant();
}

// K_ij = (B x_i) . (B x_j) over every row of `features`.
inline Matrix ExplicitGram(const Matrix& features, const Matrix& factor) {
  const Matrix e = factor * features.transpose();
  return e.transpose() * e;
}

// Brute-force argmax of P(s | conditioned, ground) over s in ground minus
// conditioned, by LU determinants of the masked-identity ratio. Exact ties go
// to the smaller subset, then the lexicographically smaller one.
inline IndexSubset EnumeratedStepArgmax(const Matrix& gram,
                                        const std::vector<int>& conditioned,
                                        const std::vector<int>& ground) {
  std::vector<int> active;
  for (int g : ground) {
    if (std::find(conditioned.begin(), conditioned.end(), g) ==
        conditioned.end()) {
      active.push_back(g);
    }
  }
  std::vector<int> all = conditioned;
  all.insert(all.end(), active.begin(), active.end());
  Matrix denom = Principal(gram, all);
  for (std::size_t i = conditioned.size(); i < all.size(); ++i) {
    denom(i, i) += 1.0;
  }
  const double z = LuDeterminant(denom);
  IndexSubset best;
  double best_p = -1.0;
  for (const IndexSubset& s : AllSubsets(active)) {
    std::vector<int> num = conditioned;
    num.insert(num.end(), s.begin(), s.end());
    const double p = LuDeterminant(Principal(gram, num)) / z;
    const bool better =
        p > best_p ||
        (p == best_p && (s.size() < best.size() ||
                         (s.size() == best.size() &&
                          std::lexicographical_compare(s.begin(), s.end(),
                                                       best.begin(),
                                                       best.end()))));
    if (better) {
      best = s;
      best_p = p;
    }
  }
  return best;
}

inline std::vector<int> Merge(const IndexSubset& a, const IndexSubset& b) {
  std::vector<int> v(a.begin(), a.end());
  for (int x : b) {
    if (!a.Contains(x)) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace shdpp::testing

#endif  // SHDPP_TESTS_ORACLES_H_
