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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "oracles.h"
#include "shdpp/dpp.h"
#include "shdpp/errors.h"

namespace shdpp {
namespace {

using testing::AllSubsets;
using testing::Iota;
using testing::RandomKernel;

Kernel Diagonal(std::initializer_list<double> values) {
  Vector d(static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) d(i++) = v;
  return Kernel::FromMatrix(d.asDiagonal());
}

TEST_CASE("IndexSubset validates ordering") {
  CHECK_THROWS_AS(IndexSubset({2, 1}), InputError);
  CHECK_THROWS_AS(IndexSubset({1, 1}), InputError);
  CHECK_THROWS_AS(IndexSubset({-1}), InputError);
  CHECK(IndexSubset::FromUnsorted({3, 1, 3}) == IndexSubset({1, 3}));
  CHECK(Union({1, 4}, {2, 4}) == IndexSubset({1, 2, 4}));
  CHECK(Difference({1, 2, 4}, {2}) == IndexSubset({1, 4}));
}

TEST_CASE("LogDet of diagonal and empty subsets") {
  const Kernel l = Diagonal({2.0, 2.0});
  CHECK(LogDet(l, {0, 1}) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(LogDet(l, {}) == 0.0);
  CHECK_THROWS_AS(LogDet(l, {0, 2}), InputError);
}

TEST_CASE("LogDet matches cofactor expansion") {
  std::mt19937_64 rng(7);
  const Kernel l = RandomKernel(5, 5, rng);
  const double oracle =
      std::log(testing::LaplaceDeterminant(testing::Principal(l.matrix(), {1, 3, 4})));
  CHECK(std::abs(LogDet(l, {1, 3, 4}) - oracle) < 1e-9);
}

TEST_CASE("LogDet is -inf for singular submatrices unless jittered") {
  const Kernel zero = Kernel::FromMatrix(Matrix::Zero(3, 3));
  CHECK(std::isinf(LogDet(zero, {0, 2})));
  CHECK(LogDet(zero, {0, 2}, PivotPolicy::kJitter) ==
        doctest::Approx(2.0 * std::log(tolerance::kJitter)));
}

TEST_CASE("Kernel rejects asymmetric and indefinite matrices") {
  Matrix asym(2, 2);
  asym << 1.0, 0.5, 0.4, 1.0;
  CHECK_THROWS_AS(Kernel::FromMatrix(asym), ModelError);
  Matrix indefinite(2, 2);
  indefinite << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(Kernel::FromMatrix(indefinite), ModelError);
  Matrix negative = -Matrix::Identity(2, 2);
  CHECK_THROWS_AS(Kernel::FromMatrix(negative), ModelError);
}

TEST_CASE("SubsetProbability on a diagonal kernel factorizes") {
  const Kernel l = Diagonal({2.0, 2.0});
  CHECK(SubsetProbability(l, {}) == doctest::Approx(1.0 / 9.0));
  CHECK(SubsetProbability(l, {0}) == doctest::Approx(2.0 / 9.0));
  CHECK(SubsetProbability(l, {1}) == doctest::Approx(2.0 / 9.0));
  CHECK(SubsetProbability(l, {0, 1}) == doctest::Approx(4.0 / 9.0));
}

TEST_CASE("SubsetProbability of the zero kernel") {
  const Kernel zero = Kernel::FromMatrix(Matrix::Zero(3, 3));
  CHECK(SubsetProbability(zero, {}) == 1.0);
  for (const IndexSubset& y : AllSubsets(Iota(0, 3))) {
    if (!y.empty()) CHECK(SubsetProbability(zero, y) == 0.0);
  }
}

TEST_CASE("Normalization over random kernels") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const int n = 1 + static_cast<int>(seed % 8);
    const int rank = 1 + static_cast<int>(seed % 5);
    const Kernel l = RandomKernel(n, rank, rng);
    double total = 0.0;
    for (const IndexSubset& y : AllSubsets(Iota(0, n))) {
      const double p = SubsetProbability(l, y);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      total += p;
    }
    CHECK(std::abs(total - 1.0) < tolerance::kProbabilitySum);
  }
}

TEST_CASE("MarginalKernel of a scaled identity") {
  const Kernel l = Kernel::FromMatrix(2.0 * Matrix::Identity(3, 3));
  const Kernel k = MarginalKernel(l);
  CHECK((k.matrix() - (2.0 / 3.0) * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-14);
  const Kernel zero = MarginalKernel(Kernel::FromMatrix(Matrix::Zero(3, 3)));
  CHECK(zero.matrix().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("MarginalKernel matches enumerated inclusion marginals") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(100 + seed);
    const int n = 5;
    const Kernel l = RandomKernel(n, 3, rng);
    const Kernel k = MarginalKernel(l);
    Matrix pair = Matrix::Zero(n, n);
    for (const IndexSubset& y : AllSubsets(Iota(0, n))) {
      const double p = SubsetProbability(l, y);
      for (int i : y) {
        for (int j : y) pair(i, j) += p;
      }
    }
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(k(i, i) - pair(i, i)) < 1e-8);
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double from_k = k(i, i) * k(j, j) - k(i, j) * k(i, j);
        CHECK(std::abs(from_k - pair(i, j)) < 1e-8);
        // Repulsion.
        CHECK(pair(i, j) <= pair(i, i) * pair(j, j) + 1e-12);
      }
    }
  }
}

TEST_CASE("ConditionalProbability with nothing conditioned is a restricted DPP") {
  std::mt19937_64 rng(3);
  const Kernel l = RandomKernel(4, 4, rng);
  const IndexSubset ground{1, 2, 3};
  const Kernel restricted = Kernel::FromMatrix(l.Submatrix(ground.indices()));
  for (const IndexSubset& local : AllSubsets(Iota(0, 3))) {
    std::vector<int> global;
    for (int i : local) global.push_back(ground[i]);
    CHECK(ConditionalProbability(l, {}, IndexSubset(global), ground) ==
          doctest::Approx(SubsetProbability(restricted, local)).epsilon(1e-12));
  }
}

TEST_CASE("ConditionalProbability diag(3, 0.5)") {
  const Kernel l = Diagonal({3.0, 0.5});
  CHECK(ConditionalProbability(l, {}, {0}, {0, 1}) == doctest::Approx(0.5));
  CHECK(ConditionalProbability(l, {}, {}, {0, 1}) == doctest::Approx(1.0 / 6.0));
  CHECK(ConditionalProbability(l, {}, {1}, {0, 1}) == doctest::Approx(0.5 / 6.0));
  CHECK(ConditionalProbability(l, {}, {0, 1}, {0, 1}) == doctest::Approx(1.5 / 6.0));
}

TEST_CASE("Conditional normalization, both layer constructions") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(200 + seed);
    // Z-layer shape: conditioned disjoint from ground.
    {
      const Kernel l = RandomKernel(3, 3, rng);
      double total = 0.0;
      for (const IndexSubset& s : AllSubsets({1, 2})) {
        total += ConditionalProbability(l, {0}, s, {1, 2});
      }
      CHECK(std::abs(total - 1.0) < tolerance::kProbabilitySum);
    }
    // Y-layer shape: conditioned = previous picks plus part of the ground.
    {
      const Kernel l = RandomKernel(8, 6, rng);
      const IndexSubset conditioned{0, 3};
      const IndexSubset ground{2, 3, 4, 5, 6, 7};
      const IndexSubset active = Difference(ground, conditioned);
      double total = 0.0;
      for (const IndexSubset& s : AllSubsets(active.indices())) {
        total += ConditionalProbability(l, conditioned, s, ground);
      }
      CHECK(std::abs(total - 1.0) < tolerance::kProbabilitySum);
      // A conditioned item is never selectable.
      CHECK_THROWS_AS(ConditionalProbability(l, conditioned, {3}, ground),
                      InputError);
    }
  }
}

TEST_CASE("ConditionalKernel agrees with the determinant-ratio route") {
  std::mt19937_64 rng(11);
  const Kernel l = RandomKernel(7, 7, rng);
  const IndexSubset conditioned{1, 5};
  const IndexSubset ground{0, 2, 3, 5};
  const Kernel schur = ConditionalKernel(l, conditioned, ground);
  const IndexSubset active = Difference(ground, conditioned);
  REQUIRE(schur.size() == active.size());
  for (const IndexSubset& local : AllSubsets(Iota(0, active.size()))) {
    std::vector<int> global;
    for (int i : local) global.push_back(active[i]);
    CHECK(ConditionalProbability(l, conditioned, IndexSubset(global), ground) ==
          doctest::Approx(SubsetProbability(schur, local)).epsilon(1e-10));
  }
}

TEST_CASE("Conditioning on a null event") {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) = 0.0;
  const Kernel l = Kernel::FromMatrix(m);
  CHECK_THROWS_AS(ConditionalProbability(l, {0}, {}, {1, 2}), NullEventError);
  CHECK_THROWS_AS(ConditionalKernel(l, {0}, {1, 2}), NullEventError);
  // The jittered policy keeps the value finite and the leading pivots cancel.
  const double lp =
      ConditionalLogProbability(l, {0}, {1}, {1, 2}, PivotPolicy::kJitter);
  CHECK(lp == doctest::Approx(std::log(1.0 / 4.0)));
}

TEST_CASE("LogDet scaling law") {
  std::mt19937_64 rng(5);
  const Kernel l = RandomKernel(6, 6, rng);
  for (double c : {0.1, 2.5, 10.0}) {
    const Kernel scaled = Kernel::FromMatrix(c * l.matrix());
    for (const IndexSubset& y : AllSubsets(Iota(0, 6))) {
      CHECK(LogDet(scaled, y) ==
            doctest::Approx(y.size() * std::log(c) + LogDet(l, y)).epsilon(1e-10));
    }
  }
}

TEST_CASE("SampleDpp edge cases") {
  const Kernel zero = Kernel::FromMatrix(Matrix::Zero(4, 4));
  for (std::uint64_t s = 0; s < 50; ++s) CHECK(SampleDpp(zero, s).empty());

  const Kernel big = Kernel::FromMatrix(Matrix::Constant(1, 1, 1e6));
  std::mt19937_64 rng(1);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += SampleDpp(big, rng).size();
  CHECK(hits >= 9990);

  std::mt19937_64 rng_a(9), rng_b(9);
  std::mt19937_64 krng(4);
  const Kernel l = RandomKernel(5, 3, krng);
  for (int i = 0; i < 20; ++i) CHECK(SampleDpp(l, rng_a) == SampleDpp(l, rng_b));
}

TEST_CASE("SampleDpp empirical frequencies") {
  std::mt19937_64 krng(21);
  const Kernel l = RandomKernel(4, 4, krng, 0.8);
  std::map<std::vector<int>, int> counts;
  std::mt19937_64 rng(123);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[SampleDpp(l, rng).indices()];
  for (const IndexSubset& y : AllSubsets(Iota(0, 4))) {
    const double p = SubsetProbability(l, y);
    const double freq = static_cast<double>(counts[y.indices()]) / draws;
    const double se = std::sqrt(p * (1.0 - p) / draws);
    CHECK(std::abs(freq - p) <= 3.0 * se + 1e-12);
  }
}

}  // namespace
}  // namespace shdpp
