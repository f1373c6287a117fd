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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.h"
#include "shdpp/errors.h"
#include "shdpp/model.h"

namespace shdpp {
namespace {

using testing::AllSubsets;
using testing::GaussianMatrix;

// Explicit Gram kernel over every shot: K_ij = (B x_i) . (B x_j).
Matrix ExplicitKernel(const Matrix& features, const Matrix& factor) {
  const int n = static_cast<int>(features.rows());
  Matrix k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vector bi = factor * features.row(i).transpose();
      const Vector bj = factor * features.row(j).transpose();
      k(i, j) = bi.dot(bj);
    }
  }
  return k;
}

double LuDet(const Matrix& k, const std::vector<int>& items) {
  if (items.empty()) return 1.0;
  return testing::Principal(k, items).partialPivLu().determinant();
}

// P(selected | conditioned) with the normalizer summed over every subset of
// `candidates` instead of the masked-identity determinant.
double EnumeratedConditional(const Matrix& k, const IndexSubset& conditioned,
                             const IndexSubset& candidates,
                             const IndexSubset& selected) {
  auto joint = [&](const IndexSubset& s) {
    std::vector<int> items(conditioned.begin(), conditioned.end());
    items.insert(items.end(), s.begin(), s.end());
    return LuDet(k, items);
  };
  double z = 0.0;
  for (const IndexSubset& s : AllSubsets(candidates.indices())) z += joint(s);
  return joint(selected) / z;
}

struct Instance {
  SequenceFeatures features;
  KernelFactors factors;
};

Instance RandomInstance(int shots, int concepts, int rank, std::mt19937_64& rng) {
  Instance in;
  in.features.query_features = GaussianMatrix(shots, concepts, rng, 0.7);
  in.features.full_features = GaussianMatrix(shots, concepts + kContextDim, rng, 0.7);
  in.factors.w = GaussianMatrix(rank, concepts, rng);
  in.factors.v = GaussianMatrix(rank, concepts + kContextDim, rng);
  return in;
}

TEST_CASE("SegmentStream keeps a trailing partial segment") {
  const Segmentation s = SegmentStream(23, 10);
  REQUIRE(s.size() == 3);
  CHECK(s.segments[0] == IndexSubset({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  CHECK(s.segments[2] == IndexSubset({20, 21, 22}));
  CHECK(SegmentStream(0, 10).size() == 0);
  CHECK_THROWS_AS(SegmentStream(5, 0), InputError);
}

TEST_CASE("ZKernel and YKernel are Gram kernels") {
  std::mt19937_64 rng(1);
  Instance in = RandomInstance(6, 4, 3, rng);
  const IndexSubset carry{1};
  const IndexSubset segment{3, 4, 5};
  const std::vector<int> order{1, 3, 4, 5};

  const Kernel z = ZKernel(in.features, segment, carry, in.factors);
  const Matrix z_oracle = testing::Principal(
      ExplicitKernel(in.features.query_features, in.factors.w), order);
  CHECK((z.matrix() - z_oracle).cwiseAbs().maxCoeff() < 1e-10);

  const Kernel y = YKernel(in.features, segment, carry, in.factors);
  const Matrix y_oracle = testing::Principal(
      ExplicitKernel(in.features.full_features, in.factors.v), order);
  CHECK((y.matrix() - y_oracle).cwiseAbs().maxCoeff() < 1e-10);

  // Identity factor: plain inner products of f(q).
  KernelFactors identity = in.factors;
  identity.w = Matrix::Identity(4, 4);
  const Kernel zi = ZKernel(in.features, segment, {}, identity);
  CHECK(zi(0, 1) == doctest::Approx(in.features.query_features.row(3).dot(
                        in.features.query_features.row(4))));

  KernelFactors zero = in.factors;
  zero.w.setZero();
  zero.v.setZero();
  CHECK(ZKernel(in.features, segment, carry, zero).matrix().norm() == 0.0);
  CHECK(YKernel(in.features, segment, carry, zero).matrix().norm() == 0.0);

  KernelFactors bad = in.factors;
  bad.w = Matrix::Ones(3, 5);
  CHECK_THROWS_AS(ZKernel(in.features, segment, carry, bad), ModelError);
}

TEST_CASE("Y kernel rank is bounded by the factor rank") {
  std::mt19937_64 rng(2);
  Instance in = RandomInstance(14, 8, 10, rng);
  std::vector<int> all(14);
  std::iota(all.begin(), all.end(), 0);
  const Kernel y = GramKernel(in.features.full_features, in.factors.v, all);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(y.matrix());
  int rank = 0;
  for (int i = 0; i < 14; ++i) rank += eig.eigenvalues()(i) > 1e-8 * eig.eigenvalues().maxCoeff();
  CHECK(rank == 10);
}

TEST_CASE("SH-DPP likelihood with empty labels is minus the log normalizers") {
  std::mt19937_64 rng(3);
  Instance in = RandomInstance(4, 3, 2, rng);
  const Segmentation seg = SegmentStream(4, 4);
  LabeledSummary labels{{StepLabels{}}};
  const std::vector<int> all{0, 1, 2, 3};
  const Matrix omega = ExplicitKernel(in.features.query_features, in.factors.w);
  const Matrix upsilon = ExplicitKernel(in.features.full_features, in.factors.v);
  const double expected =
      -std::log((omega + Matrix::Identity(4, 4)).determinant()) -
      std::log((upsilon + Matrix::Identity(4, 4)).determinant());
  CHECK(ShDppLogLikelihood(in.features, seg, labels, in.factors) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("SH-DPP likelihood equals the enumerated chain of conditionals") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(40 + seed);
    const int n_t = 3;
    const int steps = seed % 2 == 0 ? 1 : 2;
    Instance in = RandomInstance(n_t * steps, 4, 6, rng);
    const Segmentation seg = SegmentStream(n_t * steps, n_t);
    const Matrix omega = ExplicitKernel(in.features.query_features, in.factors.w);
    const Matrix upsilon = ExplicitKernel(in.features.full_features, in.factors.v);

    std::uniform_int_distribution<int> coin(0, 2);
    LabeledSummary labels;
    for (const IndexSubset& segment : seg.segments) {
      std::vector<int> z, y;
      for (int i : segment) {
        const int c = coin(rng);
        if (c == 1) z.push_back(i);
        if (c == 2) y.push_back(i);
      }
      labels.steps.push_back({IndexSubset(z), IndexSubset(y)});
    }

    double expected = 1.0;
    IndexSubset z_prev, y_prev;
    for (int t = 0; t < seg.size(); ++t) {
      const StepLabels& s = labels.steps[t];
      expected *= EnumeratedConditional(omega, z_prev, seg.segments[t], s.z);
      expected *= EnumeratedConditional(upsilon, Union(y_prev, s.z),
                                        Difference(seg.segments[t], s.z), s.y);
      z_prev = s.z;
      y_prev = s.y;
    }
    const double ll = ShDppLogLikelihood(in.features, seg, labels, in.factors);
    CHECK(std::exp(ll) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("Stepwise joint conditional sums to one") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    Instance in = RandomInstance(12, 5, 12, rng);
    const Segmentation seg = SegmentStream(12, 6);
    // Fix step 1, enumerate every (z_2, y_2) at step 2.
    const IndexSubset z1{1, 4};
    const IndexSubset y1{2};
    const IndexSubset ground = seg.segments[1];
    double total = 0.0;
    for (const IndexSubset& z2 : AllSubsets(ground.indices())) {
      const double pz = std::exp(LayerStepLogProbability(
          in.features.query_features, in.factors.w, {z1, ground, z2}));
      for (const IndexSubset& y2 : AllSubsets(Difference(ground, z2).indices())) {
        total += pz * std::exp(LayerStepLogProbability(
                          in.features.full_features, in.factors.v,
                          {Union(y1, z2), ground, y2}));
      }
    }
    CHECK(std::abs(total - 1.0) < tolerance::kProbabilitySum);
  }
}

TEST_CASE("Shots picked by the Z-layer are not selectable by the Y-layer") {
  std::mt19937_64 rng(5);
  Instance in = RandomInstance(5, 3, 4, rng);
  const LayerStep bad{{1}, {0, 1, 2, 3, 4}, {1, 2}};
  CHECK_THROWS_AS(
      LayerStepLogProbability(in.features.full_features, in.factors.v, bad),
      InputError);
}

TEST_CASE("Likelihood is invariant to relabeling shots within segments") {
  std::mt19937_64 rng(9);
  Instance in = RandomInstance(8, 4, 5, rng);
  const Segmentation seg = SegmentStream(8, 4);
  LabeledSummary labels{{StepLabels{{0, 2}, {3}}, StepLabels{{5}, {4, 7}}}};
  const double base = ShDppLogLikelihood(in.features, seg, labels, in.factors);

  // Reverse the shot order inside each segment.
  std::vector<int> perm{3, 2, 1, 0, 7, 6, 5, 4};
  Instance moved = in;
  for (int i = 0; i < 8; ++i) {
    moved.features.query_features.row(perm[i]) = in.features.query_features.row(i);
    moved.features.full_features.row(perm[i]) = in.features.full_features.row(i);
  }
  auto map = [&](const IndexSubset& s) {
    std::vector<int> out;
    for (int i : s) out.push_back(perm[i]);
    return IndexSubset::FromUnsorted(out);
  };
  LabeledSummary relabeled;
  for (const StepLabels& s : labels.steps) {
    relabeled.steps.push_back({map(s.z), map(s.y)});
  }
  CHECK(ShDppLogLikelihood(moved.features, seg, relabeled, moved.factors) ==
        doctest::Approx(base).epsilon(1e-11));
}

TEST_CASE("Label validation") {
  const Segmentation seg = SegmentStream(6, 3);
  CHECK_THROWS_AS(ValidateLabels(seg, {{StepLabels{}}}), InputError);
  CHECK_THROWS_AS(ValidateLabels(seg, {{StepLabels{{4}, {}}, StepLabels{}}}),
                  InputError);
  CHECK_THROWS_AS(ValidateLabels(seg, {{StepLabels{{1}, {1}}, StepLabels{}}}),
                  InputError);
  CHECK_NOTHROW(ValidateLabels(seg, {{StepLabels{{1}, {0}}, StepLabels{{}, {5}}}}));
}

TEST_CASE("seqDPP likelihood") {
  std::mt19937_64 rng(13);
  const Matrix features = GaussianMatrix(6, 4, rng, 0.8);
  const Matrix w = GaussianMatrix(4, 4, rng);
  const Matrix k = ExplicitKernel(features, w);

  // T = 1 is a vanilla DPP.
  {
    const Segmentation seg = SegmentStream(3, 3);
    const std::vector<IndexSubset> sel{{0, 2}};
    const double expected = std::log(
        LuDet(k, {0, 2}) / (testing::Principal(k, {0, 1, 2}) + Matrix::Identity(3, 3)).determinant());
    CHECK(SeqDppLogLikelihood(features, seg, sel, w) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  // T = 2 against the enumerated chain.
  {
    const Segmentation seg = SegmentStream(6, 3);
    const std::vector<IndexSubset> sel{{1}, {3, 5}};
    const double expected =
        EnumeratedConditional(k, {}, {0, 1, 2}, {1}) *
        EnumeratedConditional(k, {1}, {3, 4, 5}, {3, 5});
    CHECK(std::exp(SeqDppLogLikelihood(features, seg, sel, w)) ==
          doctest::Approx(expected).epsilon(1e-10));
    // Without carryover the steps are independent DPPs.
    const double independent =
        EnumeratedConditional(k, {}, {0, 1, 2}, {1}) *
        EnumeratedConditional(k, {}, {3, 4, 5}, {3, 5});
    CHECK(std::exp(SeqDppLogLikelihood(features, seg, sel, w, false)) ==
          doctest::Approx(independent).epsilon(1e-10));
  }
  // Scaling W by c multiplies the kernel by c^2.
  {
    const Segmentation seg = SegmentStream(3, 3);
    const std::vector<IndexSubset> sel{{0, 1}};
    const IndexSubset all{0, 1, 2};
    const Kernel base = GramKernel(features, w, all.indices());
    const Kernel scaled = GramKernel(features, 3.0 * w, all.indices());
    CHECK(LogDet(scaled, {0, 1}) ==
          doctest::Approx(LogDet(base, {0, 1}) + 2 * std::log(9.0)).epsilon(1e-12));
  }
}

TEST_CASE("Jittered likelihood stays finite for rank-deficient labels") {
  std::mt19937_64 rng(21);
  Instance in = RandomInstance(6, 3, 1, rng);
  const Segmentation seg = SegmentStream(6, 6);
  LabeledSummary labels{{StepLabels{{0, 1, 2}, {3, 4}}}};
  const double ll = ShDppLogLikelihood(in.features, seg, labels, in.factors);
  CHECK(std::isfinite(ll));
  CHECK(std::isinf(LayerStepLogProbability(in.features.query_features,
                                           in.factors.w,
                                           {{}, seg.segments[0], {0, 1}},
                                           PivotPolicy::kExact)));
}

}  // namespace
}  // namespace shdpp
