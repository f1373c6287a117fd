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

// Exact probability computations for L-ensemble determinantal point
// processes and the conditional DPPs obtained by fixing part of the sample.
//
// A conditional DPP is described by three index sets over one kernel:
//   conditioned  items known to be in the sample,
//   ground       items eligible at this step (may overlap `conditioned`),
//   selected     the candidate outcome, a subset of ground minus conditioned.
// Its probability is
//   det(L[conditioned + selected]) / det(L[conditioned + ground] + I_active)
// where I_active is the identity restricted to ground minus conditioned and
// zero on the conditioned entries. The masked identity is never stored; it is
// materialized only inside the denominator factorization.

#ifndef SHDPP_DPP_H_
#define SHDPP_DPP_H_

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace shdpp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace tolerance {
// Largest |L_ij - L_ji| accepted for a kernel.
inline constexpr double kSymmetry = 1e-10;
// Eigenvalues below this, times max(1, largest eigenvalue), are a PSD
// violation.
inline constexpr double kNegativeEigenvalue = -1e-8;
// Pivots below this, or below kSingularRatio times the item's own diagonal
// entry, are treated as zero.
inline constexpr double kSingularPivot = 1e-12;
inline constexpr double kSingularRatio = 1e-10;
// Replacement value for a zero pivot under PivotPolicy::kJitter.
inline constexpr double kJitter = 1e-10;
// Normalization checks on enumerated probabilities.
inline constexpr double kProbabilitySum = 1e-8;
}  // namespace tolerance

// Throws ModelError unless `a` is square, finite, symmetric within
// kSymmetry and PSD within kNegativeEigenvalue.
void CheckPsd(const Matrix& a);

inline double SingularPivotBound(double diagonal) {
  return std::max(tolerance::kSingularPivot,
                  tolerance::kSingularRatio * diagonal);
}

// Sorted, duplicate-free list of item indices.
class IndexSubset {
 public:
  IndexSubset() = default;
  // Throws InputError unless `indices` is strictly increasing and nonnegative.
  explicit IndexSubset(std::vector<int> indices);
  IndexSubset(std::initializer_list<int> indices);

  // Sorts and removes duplicates.
  static IndexSubset FromUnsorted(std::vector<int> indices);
  // Items universe[b] for every set bit b of `mask`.
  static IndexSubset FromMask(std::uint64_t mask, std::span<const int> universe);

  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  int operator[](int i) const { return indices_[i]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool Contains(int index) const;
  // True when every index is < n.
  bool FitsIn(int n) const;
  std::string ToString() const;

  friend bool operator==(const IndexSubset&, const IndexSubset&) = default;

 private:
  std::vector<int> indices_;
};

IndexSubset Union(const IndexSubset& a, const IndexSubset& b);
IndexSubset Difference(const IndexSubset& a, const IndexSubset& b);
IndexSubset Intersection(const IndexSubset& a, const IndexSubset& b);
bool IsSubset(const IndexSubset& inner, const IndexSubset& outer);

// Symmetric positive semidefinite L-ensemble kernel.
class Kernel {
 public:
  Kernel() = default;

  // Validates with CheckPsd.
  static Kernel FromMatrix(Matrix entries);
  // L = embedding^T * embedding for a d x N embedding. PSD by construction.
  static Kernel FromEmbedding(const Matrix& embedding);

  const Matrix& matrix() const { return entries_; }
  int size() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }

  // Principal submatrix in the order given.
  Matrix Submatrix(std::span<const int> order) const;

 private:
  explicit Kernel(Matrix entries) : entries_(std::move(entries)) {}

  Matrix entries_;
};

enum class PivotPolicy {
  // A zero pivot makes the determinant exactly 0 (log det = -inf).
  kExact,
  // A zero pivot is replaced by tolerance::kJitter so log det stays finite.
  kJitter,
};

struct CholeskyFactor {
  // Lower-triangular factor. Under kExact it is only filled up to the first
  // zero pivot.
  Matrix lower;
  double log_det = 0.0;
  bool singular = false;
  int jittered_pivots = 0;
};

// Cholesky factorization of a symmetric PSD matrix under `policy`. The input
// is not validated; pivots below SingularPivotBound, negative ones included,
// count as zero. Under kJitter the column below a zero pivot is left at zero.
CholeskyFactor FactorizePsd(const Matrix& a, PivotPolicy policy);

// log det L[subset]; 0 for the empty subset, -inf when singular.
double LogDet(const Kernel& kernel, const IndexSubset& subset,
              PivotPolicy policy = PivotPolicy::kExact);

// log det(L + I).
double LogNormalizer(const Kernel& kernel);

// det(L[subset]) / det(L + I).
double SubsetProbability(const Kernel& kernel, const IndexSubset& subset);

// K = L (L + I)^{-1}; K_ii is the inclusion probability of item i.
Kernel MarginalKernel(const Kernel& kernel);

// Log of the conditional DPP probability described at the top of this file.
// Throws InputError when `selected` is not inside ground minus conditioned and
// NullEventError when L[conditioned] is singular under kExact.
double ConditionalLogProbability(const Kernel& kernel,
                                 const IndexSubset& conditioned,
                                 const IndexSubset& selected,
                                 const IndexSubset& ground,
                                 PivotPolicy policy = PivotPolicy::kExact);

double ConditionalProbability(const Kernel& kernel,
                              const IndexSubset& conditioned,
                              const IndexSubset& selected,
                              const IndexSubset& ground);

// The conditional DPP as an ordinary L-ensemble over ground minus conditioned
// (ascending order): the Schur complement of L[conditioned].
Kernel ConditionalKernel(const Kernel& kernel, const IndexSubset& conditioned,
                         const IndexSubset& ground);

// Exact spectral sampler.
IndexSubset SampleDpp(const Kernel& kernel, std::mt19937_64& rng);
IndexSubset SampleDpp(const Kernel& kernel, std::uint64_t seed);

}  // namespace shdpp

#endif  // SHDPP_DPP_H_
