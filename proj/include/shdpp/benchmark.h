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

// Leave-one-video-out benchmark of the learned summarizers and baselines.

#ifndef SHDPP_BENCHMARK_H_
#define SHDPP_BENCHMARK_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shdpp/corpus.h"
#include "shdpp/eval.h"
#include "shdpp/training.h"

namespace shdpp {

enum class Method { kShDpp, kSeqDpp, kDpp, kRanking, kSampling };

const char* ToString(Method method);
Method ParseMethod(std::string_view text);
// Comma-separated list.
std::vector<Method> ParseMethods(std::string_view text);
std::vector<Method> AllMethods();
bool IsLearned(Method method);

// Per-video data computed once: oracle summary, shot features, raw scores.
struct PreparedVideo {
  const VideoRecord* record = nullptr;
  IndexSubset oracle;
  std::vector<ShotFeatures> shots;
  Matrix raw_scores;
};

PreparedVideo PrepareVideo(const VideoRecord& video);

std::vector<FactorShape> FactorShapes(Method method, int concept_dim, int rank);

// Bi-concept queries with at least one relevant groundtruth shot, at most
// `cap` of them (0 keeps all) drawn deterministically from `seed`, returned in
// enumeration order. Impatient mode only uses concepts of the oracle.
std::vector<Query> SelectQueries(const PreparedVideo& video, UserMode mode,
                                 int arity, int cap, std::uint64_t seed);

struct ExampleOptions {
  UserMode mode = UserMode::kPatient;
  int segment_size = kDefaultSegmentSize;
  int queries_per_video = 0;
  std::uint64_t seed = 0;
};

std::vector<TrainingExample> BuildTrainingExamples(
    Method method, std::span<const PreparedVideo> videos,
    const ExampleOptions& options);

struct SystemSummary {
  IndexSubset shots;
  LabeledSummary labels;  // SH-DPP only
  bool layered = false;
};

// `factors` is ignored by the baselines; `budget` and `seed` only matter to
// them.
SystemSummary RunMethod(Method method, const Factors& factors,
                        const PreparedVideo& video, const Query& query,
                        int segment_size, int budget, std::uint64_t seed);

struct BenchmarkConfig {
  UserMode mode = UserMode::kPatient;
  int test_arity = 2;
  int segment_size = kDefaultSegmentSize;
  int rank = kDefaultRank;
  std::vector<Method> methods = AllMethods();
  TrainConfig train;
  int train_queries_per_video = 0;
  int test_queries_per_video = 0;
  std::uint64_t seed = 0;
  int skip = kDefaultSkipDistance;
};

struct MethodRow {
  Method method = Method::kShDpp;
  // Means over folds of per-fold query means.
  ScoreTriple score;
  double hr = 0.0;
  double hr_z = 0.0;
  bool has_z = false;
  // Totals over all folds and queries.
  long relevant = 0;
  long hits = 0;
  long z_hits = 0;
  int queries = 0;
  int folds = 0;
  std::vector<std::string> errors;
};

struct BenchmarkResult {
  UserMode mode = UserMode::kPatient;
  int arity = 2;
  int segment_size = kDefaultSegmentSize;
  std::vector<MethodRow> rows;

  const MethodRow* Find(Method method) const;
};

// Each video is the test video once; learned methods are fit on the others
// with bi-concept queries whatever the test arity. A method that fails on a
// fold is recorded in `errors` and skipped for that fold.
BenchmarkResult RunBenchmark(std::span<const VideoRecord> videos,
                             const BenchmarkConfig& config);

// Columns method, F, Prec, Recall, HR, HR_Z as percentages; HR_Z is "-" for
// single-layer methods.
std::string FormatDsv(const BenchmarkResult& result, char delimiter = '\t');
std::string FormatTable(const BenchmarkResult& result);

struct SweepPoint {
  int segment_size = 0;
  BenchmarkResult result;
};

std::vector<SweepPoint> SegmentSizeSweep(std::span<const VideoRecord> videos,
                                         BenchmarkConfig config,
                                         const std::vector<int>& sizes);
// One row per (segment size, method): segment_size method F Prec Recall HR
// HR_Z status.
std::string FormatSweep(const std::vector<SweepPoint>& sweep);

}  // namespace shdpp

#endif  // SHDPP_BENCHMARK_H_
