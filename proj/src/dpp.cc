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

#include "shdpp/dpp.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>

#include "shdpp/errors.h"

namespace shdpp {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void CheckRange(const IndexSubset& subset, int n, const char* what) {
  if (!subset.FitsIn(n)) {
    throw InputError(std::string(what) + " " + subset.ToString() +
                     " out of range for kernel of size " + std::to_string(n));
  }
}

}  // namespace

IndexSubset::IndexSubset(std::vector<int> indices)
    : indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || (i > 0 && indices_[i] <= indices_[i - 1])) {
      throw InputError("index subset must be strictly increasing and "
                       "nonnegative: " + ToString());
    }
  }
}

IndexSubset::IndexSubset(std::initializer_list<int> indices)
    : IndexSubset(std::vector<int>(indices)) {}

IndexSubset IndexSubset::FromUnsorted(std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return IndexSubset(std::move(indices));
}

IndexSubset IndexSubset::FromMask(std::uint64_t mask,
                                  std::span<const int> universe) {
  std::vector<int> out;
  for (std::size_t b = 0; b < universe.size(); ++b) {
    if (mask >> b & 1u) out.push_back(universe[b]);
  }
  return FromUnsorted(std::move(out));
}

bool IndexSubset::Contains(int index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool IndexSubset::FitsIn(int n) const {
  return indices_.empty() || indices_.back() < n;
}

std::string IndexSubset::ToString() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) os << ',';
    os << indices_[i];
  }
  os << '}';
  return os.str();
}

IndexSubset Union(const IndexSubset& a, const IndexSubset& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return IndexSubset(std::move(out));
}

IndexSubset Difference(const IndexSubset& a, const IndexSubset& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return IndexSubset(std::move(out));
}

IndexSubset Intersection(const IndexSubset& a, const IndexSubset& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return IndexSubset(std::move(out));
}

bool IsSubset(const IndexSubset& inner, const IndexSubset& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

void CheckPsd(const Matrix& entries) {
  if (entries.rows() != entries.cols()) {
    throw ModelError("kernel must be square");
  }
  if (entries.size() == 0) return;
  if (!entries.allFinite()) throw ModelError("kernel has non-finite entries");
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > tolerance::kSymmetry) {
    throw ModelError("kernel is not symmetric (max asymmetry " +
                     std::to_string(asym) + ")");
  }
  const Vector eig =
      Eigen::SelfAdjointEigenSolver<Matrix>(entries, Eigen::EigenvaluesOnly)
          .eigenvalues();
  const double bound =
      tolerance::kNegativeEigenvalue * std::max(1.0, eig.maxCoeff());
  if (eig.minCoeff() < bound) {
    throw ModelError("kernel is not positive semidefinite (eigenvalue " +
                     std::to_string(eig.minCoeff()) + ")");
  }
}

Kernel Kernel::FromMatrix(Matrix entries) {
  CheckPsd(entries);
  return Kernel(std::move(entries));
}

Kernel Kernel::FromEmbedding(const Matrix& embedding) {
  Matrix gram = embedding.transpose() * embedding;
  // Bitwise symmetry; the product can differ in the last ulp.
  gram = (0.5 * (gram + gram.transpose())).eval();
  return Kernel(std::move(gram));
}

Matrix Kernel::Submatrix(std::span<const int> order) const {
  const int k = static_cast<int>(order.size());
  Matrix sub(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) sub(i, j) = entries_(order[i], order[j]);
  }
  return sub;
}

CholeskyFactor FactorizePsd(const Matrix& a, PivotPolicy policy) {
  const int n = static_cast<int>(a.rows());
  CholeskyFactor f;
  f.lower = Matrix::Zero(n, n);
  Matrix& l = f.lower;
  for (int j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (int k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (pivot < SingularPivotBound(a(j, j))) {
      if (policy == PivotPolicy::kExact) {
        f.singular = true;
        f.log_det = kNegInf;
        return f;
      }
      l(j, j) = std::sqrt(tolerance::kJitter);
      f.log_det += std::log(tolerance::kJitter);
      ++f.jittered_pivots;
      continue;
    }
    const double root = std::sqrt(pivot);
    l(j, j) = root;
    f.log_det += std::log(pivot);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / root;
    }
  }
  return f;
}

double LogDet(const Kernel& kernel, const IndexSubset& subset,
              PivotPolicy policy) {
  CheckRange(subset, kernel.size(), "subset");
  if (subset.empty()) return 0.0;
  return FactorizePsd(kernel.Submatrix(subset.indices()), policy).log_det;
}

double LogNormalizer(const Kernel& kernel) {
  const int n = kernel.size();
  Matrix shifted = kernel.matrix() + Matrix::Identity(n, n);
  return FactorizePsd(shifted, PivotPolicy::kExact).log_det;
}

double SubsetProbability(const Kernel& kernel, const IndexSubset& subset) {
  const double log_num = LogDet(kernel, subset);
  if (log_num == kNegInf) return 0.0;
  return std::exp(log_num - LogNormalizer(kernel));
}

Kernel MarginalKernel(const Kernel& kernel) {
  const int n = kernel.size();
  const Matrix shifted = kernel.matrix() + Matrix::Identity(n, n);
  const Matrix inverse = shifted.llt().solve(Matrix::Identity(n, n));
  Matrix k = Matrix::Identity(n, n) - inverse;
  k = (0.5 * (k + k.transpose())).eval();
  return Kernel::FromMatrix(std::move(k));
}

double ConditionalLogProbability(const Kernel& kernel,
                                 const IndexSubset& conditioned,
                                 const IndexSubset& selected,
                                 const IndexSubset& ground,
                                 PivotPolicy policy) {
  const int n = kernel.size();
  CheckRange(conditioned, n, "conditioned set");
  CheckRange(ground, n, "ground set");
  CheckRange(selected, n, "selected set");
  const IndexSubset active = Difference(ground, conditioned);
  if (!IsSubset(selected, active)) {
    throw InputError("selected set " + selected.ToString() +
                     " must lie in ground minus conditioned " +
                     active.ToString());
  }

  // Conditioned items first, so the leading block of both factorizations is
  // the same and its pivots cancel exactly.
  std::vector<int> den_order(conditioned.begin(), conditioned.end());
  den_order.insert(den_order.end(), active.begin(), active.end());
  Matrix den = kernel.Submatrix(den_order);
  for (int i = conditioned.size(); i < den.rows(); ++i) den(i, i) += 1.0;
  const CholeskyFactor den_factor = FactorizePsd(den, policy);
  if (den_factor.singular) {
    throw NullEventError("conditioning set " + conditioned.ToString() +
                         " has probability zero");
  }

  std::vector<int> num_order(conditioned.begin(), conditioned.end());
  num_order.insert(num_order.end(), selected.begin(), selected.end());
  const double log_num =
      num_order.empty()
          ? 0.0
          : FactorizePsd(kernel.Submatrix(num_order), policy).log_det;
  if (log_num == kNegInf) return kNegInf;
  return log_num - den_factor.log_det;
}

double ConditionalProbability(const Kernel& kernel,
                              const IndexSubset& conditioned,
                              const IndexSubset& selected,
                              const IndexSubset& ground) {
  return std::exp(ConditionalLogProbability(kernel, conditioned, selected,
                                            ground, PivotPolicy::kExact));
}

Kernel ConditionalKernel(const Kernel& kernel, const IndexSubset& conditioned,
                         const IndexSubset& ground) {
  CheckRange(conditioned, kernel.size(), "conditioned set");
  CheckRange(ground, kernel.size(), "ground set");
  const IndexSubset active = Difference(ground, conditioned);
  const Matrix laa = kernel.Submatrix(active.indices());
  if (conditioned.empty()) return Kernel::FromMatrix(laa);

  const Matrix lcc = kernel.Submatrix(conditioned.indices());
  const CholeskyFactor cf = FactorizePsd(lcc, PivotPolicy::kExact);
  if (cf.singular) {
    throw NullEventError("conditioning set " + conditioned.ToString() +
                         " has probability zero");
  }
  Matrix lca(conditioned.size(), active.size());
  for (int i = 0; i < conditioned.size(); ++i) {
    for (int j = 0; j < active.size(); ++j) {
      lca(i, j) = kernel(conditioned[i], active[j]);
    }
  }
  const Matrix half =
      cf.lower.triangularView<Eigen::Lower>().solve(lca);  // L^{-1} L_ca
  Matrix schur = laa - half.transpose() * half;
  schur = (0.5 * (schur + schur.transpose())).eval();
  return Kernel::FromMatrix(std::move(schur));
}

IndexSubset SampleDpp(const Kernel& kernel, std::mt19937_64& rng) {
  const int n = kernel.size();
  if (n == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> eig(kernel.matrix());
  const Vector& lambda = eig.eigenvalues();
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<int> chosen;
  for (int i = 0; i < n; ++i) {
    const double l = std::max(lambda(i), 0.0);
    if (unif(rng) < l / (l + 1.0)) chosen.push_back(i);
  }
  Matrix basis(n, static_cast<int>(chosen.size()));
  for (std::size_t c = 0; c < chosen.size(); ++c) {
    basis.col(static_cast<int>(c)) = eig.eigenvectors().col(chosen[c]);
  }

  std::vector<int> sample;
  while (basis.cols() > 0) {
    const int k = static_cast<int>(basis.cols());
    // P(item i) = squared row norm / k.
    const Vector weights = basis.rowwise().squaredNorm();
    const double total = weights.sum();
    double u = unif(rng) * total;
    int item = n - 1;
    for (int i = 0; i < n; ++i) {
      u -= weights(i);
      if (u <= 0.0) {
        item = i;
        break;
      }
    }
    sample.push_back(item);

    // Project the basis onto the complement of e_item, dropping one column.
    int pivot_col = 0;
    basis.row(item).cwiseAbs().maxCoeff(&pivot_col);
    const Vector pivot = basis.col(pivot_col);
    Matrix reduced(n, k - 1);
    for (int j = 0, c = 0; j < k; ++j) {
      if (j == pivot_col) continue;
      reduced.col(c++) =
          basis.col(j) - pivot * (basis(item, j) / pivot(item));
    }
    if (reduced.cols() > 0) {
      Eigen::HouseholderQR<Matrix> qr(reduced);
      reduced = qr.householderQ() * Matrix::Identity(n, k - 1);
    }
    basis = std::move(reduced);
  }
  return IndexSubset::FromUnsorted(std::move(sample));
}

IndexSubset SampleDpp(const Kernel& kernel, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return SampleDpp(kernel, rng);
}

}  // namespace shdpp
