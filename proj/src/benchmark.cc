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

#include "shdpp/benchmark.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "shdpp/errors.h"
#include "shdpp/inference.h"
#include "shdpp/parallel.h"

namespace shdpp {
namespace {

struct QueryOutcome {
  ScoreTriple score;
  HittingRecallReport hr;
};

std::string Percent(double value, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, 100.0 * value);
  return buf;
}

std::vector<std::string> RowCells(const MethodRow& row, int digits) {
  std::vector<std::string> cells = {ToString(row.method)};
  if (row.folds == 0) {
    cells.insert(cells.end(), 5, "-");
    return cells;
  }
  cells.push_back(Percent(row.score.f_measure, digits));
  cells.push_back(Percent(row.score.precision, digits));
  cells.push_back(Percent(row.score.recall, digits));
  cells.push_back(Percent(row.hr, digits));
  cells.push_back(row.has_z ? Percent(row.hr_z, digits) : "-");
  return cells;
}

const std::vector<std::string> kColumns = {"method", "F",  "Prec",
                                           "Recall", "HR", "HR_Z"};

}  // namespace

const char* ToString(Method method) {
  switch (method) {
    case Method::kShDpp: return "shdpp";
    case Method::kSeqDpp: return "seqdpp";
    case Method::kDpp: return "dpp";
    case Method::kRanking: return "ranking";
    case Method::kSampling: return "sampling";
  }
  return "?";
}

Method ParseMethod(std::string_view text) {
  for (Method m : AllMethods()) {
    if (text == ToString(m)) return m;
  }
  throw InputError("unknown method '" + std::string(text) +
                   "' (expected shdpp, seqdpp, dpp, ranking or sampling)");
}

std::vector<Method> ParseMethods(std::string_view text) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view part = text.substr(start, comma - start);
    if (!part.empty()) {
      const Method m = ParseMethod(part);
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    start = comma + 1;
  }
  if (out.empty()) throw InputError("no methods given");
  return out;
}

std::vector<Method> AllMethods() {
  return {Method::kShDpp, Method::kSeqDpp, Method::kDpp, Method::kRanking,
          Method::kSampling};
}

bool IsLearned(Method method) {
  return method == Method::kShDpp || method == Method::kSeqDpp ||
         method == Method::kDpp;
}

PreparedVideo PrepareVideo(const VideoRecord& video) {
  PreparedVideo p;
  p.record = &video;
  p.oracle = OracleSummary(video);
  p.shots = ExtractShotFeatures(video);
  p.raw_scores = RawConceptScores(video);
  return p;
}

std::vector<FactorShape> FactorShapes(Method method, int concept_dim, int rank) {
  switch (method) {
    case Method::kShDpp:
      return {{rank, concept_dim}, {rank, concept_dim + kContextDim}};
    case Method::kSeqDpp:
    case Method::kDpp:
      return {{rank, concept_dim}};
    default:
      throw InputError(std::string(ToString(method)) + " has no factors");
  }
}

std::vector<Query> SelectQueries(const PreparedVideo& video, UserMode mode,
                                 int arity, int cap, std::uint64_t seed) {
  const VideoRecord& record = *video.record;
  std::vector<Query> all;
  if (mode == UserMode::kImpatient) {
    const std::vector<int> allowed = OracleConcepts(record, video.oracle);
    if (static_cast<int>(allowed.size()) < arity) return {};
    all = EnumerateQueries(record.lexicon, arity, &allowed);
  } else {
    all = EnumerateQueries(record.lexicon, arity);
  }
  std::vector<Query> useful;
  for (const Query& q : all) {
    if (!BuildGroundtruth(record, video.oracle, q, mode).relevant.empty()) {
      useful.push_back(q);
    }
  }
  if (cap <= 0 || static_cast<int>(useful.size()) <= cap) return useful;
  std::vector<int> order(useful.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(cap);
  std::sort(order.begin(), order.end());
  std::vector<Query> out;
  for (int i : order) out.push_back(useful[i]);
  return out;
}

std::vector<TrainingExample> BuildTrainingExamples(
    Method method, std::span<const PreparedVideo> videos,
    const ExampleOptions& options) {
  if (!IsLearned(method)) {
    throw InputError(std::string(ToString(method)) + " is not trained");
  }
  std::vector<TrainingExample> examples;
  for (std::size_t v = 0; v < videos.size(); ++v) {
    const PreparedVideo& video = videos[v];
    const VideoRecord& record = *video.record;
    const Segmentation seg =
        SegmentStream(record.num_shots(), options.segment_size);
    for (const Query& q : SelectQueries(video, options.mode, 2,
                                        options.queries_per_video,
                                        options.seed + v)) {
      const GroundtruthSummary gt =
          BuildGroundtruth(record, video.oracle, q, options.mode);
      auto features = std::make_shared<const SequenceFeatures>(
          BuildSequenceFeatures(video.shots, q, record.lexicon));
      if (method == Method::kShDpp) {
        examples.push_back(MakeShDppExample(
            features, seg, GroundtruthLabels(gt, seg), record.id, q.label()));
        continue;
      }
      std::vector<IndexSubset> selections;
      for (const IndexSubset& g : seg.segments) {
        selections.push_back(Intersection(g, gt.shots));
      }
      std::shared_ptr<const Matrix> rows(features, &features->query_features);
      examples.push_back(MakeSequentialExample(rows, seg, selections,
                                               method == Method::kSeqDpp,
                                               record.id, q.label()));
    }
  }
  return examples;
}

SystemSummary RunMethod(Method method, const Factors& factors,
                        const PreparedVideo& video, const Query& query,
                        int segment_size, int budget, std::uint64_t seed) {
  const VideoRecord& record = *video.record;
  const int n = record.num_shots();
  SystemSummary out;
  if (method == Method::kRanking) {
    out.shots = BaselineRanking(video.raw_scores, query, std::min(budget, n));
    return out;
  }
  if (method == Method::kSampling) {
    out.shots = BaselineSampling(n, std::min(budget, n), seed);
    return out;
  }
  const Segmentation seg = SegmentStream(n, segment_size);
  const SequenceFeatures features =
      BuildSequenceFeatures(video.shots, query, record.lexicon);
  const std::size_t expected = method == Method::kShDpp ? 2 : 1;
  if (factors.size() != expected) {
    throw InputError(std::string(ToString(method)) + " expects " +
                     std::to_string(expected) + " factor(s)");
  }
  if (method == Method::kShDpp) {
    out.labels = SummarizeShDpp(features, seg, {factors[0], factors[1]});
    out.shots = out.labels.AllShots();
    out.layered = true;
  } else if (method == Method::kSeqDpp) {
    out.shots = Flatten(SummarizeSeqDpp(features.query_features, seg, factors[0]));
  } else {
    out.shots =
        Flatten(SummarizeVanillaDpp(features.query_features, seg, factors[0]));
  }
  return out;
}

const MethodRow* BenchmarkResult::Find(Method method) const {
  for (const MethodRow& r : rows) {
    if (r.method == method) return &r;
  }
  return nullptr;
}

BenchmarkResult RunBenchmark(std::span<const VideoRecord> videos,
                             const BenchmarkConfig& config) {
  if (videos.size() < 2) throw InputError("benchmark needs at least 2 videos");
  if (config.test_arity != 2 && config.test_arity != 3) {
    throw InputError("arity must be 2 or 3");
  }
  if (config.methods.empty()) throw InputError("no methods to benchmark");
  config.train.Validate();

  std::vector<PreparedVideo> prepared;
  for (const VideoRecord& v : videos) prepared.push_back(PrepareVideo(v));

  BenchmarkResult result;
  result.mode = config.mode;
  result.arity = config.test_arity;
  result.segment_size = config.segment_size;
  for (Method m : config.methods) {
    MethodRow row;
    row.method = m;
    row.has_z = m == Method::kShDpp;
    result.rows.push_back(row);
  }

  const int num_videos = static_cast<int>(prepared.size());
  for (int test = 0; test < num_videos; ++test) {
    const PreparedVideo& held = prepared[test];
    std::vector<PreparedVideo> train;
    for (int v = 0; v < num_videos; ++v) {
      if (v != test) train.push_back(prepared[v]);
    }
    const std::vector<Query> queries =
        SelectQueries(held, config.mode, config.test_arity,
                      config.test_queries_per_video, config.seed + 1000 + test);
    const int concept_dim = held.record->lexicon.size();

    for (MethodRow& row : result.rows) {
      const Method m = row.method;
      Factors factors;
      try {
        if (IsLearned(m)) {
          ExampleOptions options;
          options.mode = config.mode;
          options.segment_size = config.segment_size;
          options.queries_per_video = config.train_queries_per_video;
          options.seed = config.seed;
          const auto examples = BuildTrainingExamples(m, train, options);
          if (examples.empty()) throw TrainingError("no training queries");
          factors = Fit(examples, FactorShapes(m, concept_dim, config.rank),
                        config.train)
                        .factors;
        }
        std::vector<QueryOutcome> outcomes(queries.size());
        ParallelFor(static_cast<int>(queries.size()), [&](int qi) {
          const Query& q = queries[qi];
          const GroundtruthSummary gt = BuildGroundtruth(
              *held.record, held.oracle, q, config.mode);
          const std::uint64_t seed =
              config.seed * 1000003ull + test * 7919ull + qi;
          const SystemSummary s = RunMethod(m, factors, held, q,
                                            config.segment_size,
                                            gt.shots.size(), seed);
          outcomes[qi].score = SummaryScore(s.shots, gt, *held.record, config.skip);
          outcomes[qi].hr = s.layered ? HittingRecall(s.labels, gt)
                                      : HittingRecall(s.shots, gt);
        });
        if (outcomes.empty()) continue;
        double f = 0, p = 0, r = 0, hr = 0, hr_z = 0;
        for (const QueryOutcome& o : outcomes) {
          f += o.score.f_measure;
          p += o.score.precision;
          r += o.score.recall;
          hr += o.hr.hr_overall;
          hr_z += o.hr.hr_z;
          row.relevant += o.hr.relevant;
          row.hits += o.hr.hits;
          row.z_hits += o.hr.z_hits;
        }
        const double count = static_cast<double>(outcomes.size());
        row.score.f_measure += f / count;
        row.score.precision += p / count;
        row.score.recall += r / count;
        row.hr += hr / count;
        row.hr_z += hr_z / count;
        row.queries += static_cast<int>(outcomes.size());
        ++row.folds;
      } catch (const std::exception& e) {
        row.errors.push_back("test " + held.record->id + ": " + e.what());
      }
    }
  }
  for (MethodRow& row : result.rows) {
    if (row.folds == 0) continue;
    row.score.f_measure /= row.folds;
    row.score.precision /= row.folds;
    row.score.recall /= row.folds;
    row.hr /= row.folds;
    row.hr_z /= row.folds;
  }
  return result;
}

std::string FormatDsv(const BenchmarkResult& result, char delimiter) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (i) out << delimiter;
    out << kColumns[i];
  }
  out << '\n';
  for (const MethodRow& row : result.rows) {
    const auto cells = RowCells(row, 4);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << delimiter;
      out << cells[i];
    }
    out << '\n';
  }
  return out.str();
}

std::string FormatTable(const BenchmarkResult& result) {
  std::ostringstream out;
  out << "mode " << ToString(result.mode) << ", " << result.arity
      << "-concept queries, segment size " << result.segment_size << "\n";
  out << std::left << std::setw(10) << kColumns[0] << std::right;
  for (std::size_t i = 1; i < kColumns.size(); ++i) {
    out << std::setw(9) << kColumns[i];
  }
  out << '\n';
  for (const MethodRow& row : result.rows) {
    const auto cells = RowCells(row, 2);
    out << std::left << std::setw(10) << cells[0] << std::right;
    for (std::size_t i = 1; i < cells.size(); ++i) out << std::setw(9) << cells[i];
    out << '\n';
  }
  for (const MethodRow& row : result.rows) {
    for (const std::string& e : row.errors) {
      out << "! " << ToString(row.method) << ": " << e << '\n';
    }
  }
  return out.str();
}

std::vector<SweepPoint> SegmentSizeSweep(std::span<const VideoRecord> videos,
                                         BenchmarkConfig config,
                                         const std::vector<int>& sizes) {
  std::vector<SweepPoint> out;
  for (int size : sizes) {
    config.segment_size = size;
    out.push_back({size, RunBenchmark(videos, config)});
  }
  return out;
}

std::string FormatSweep(const std::vector<SweepPoint>& sweep) {
  std::ostringstream out;
  out << "segment_size\tmethod\tF\tPrec\tRecall\tHR\tHR_Z\tstatus\n";
  for (const SweepPoint& point : sweep) {
    for (const MethodRow& row : point.result.rows) {
      out << point.segment_size;
      for (const std::string& cell : RowCells(row, 4)) out << '\t' << cell;
      out << '\t' << (row.errors.empty() ? "ok" : "failed") << '\n';
    }
  }
  return out.str();
}

}  // namespace shdpp
