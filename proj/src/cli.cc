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

#include "shdpp/cli.h"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string_view>

#include "CLI11.hpp"
#include "shdpp/benchmark.h"
#include "shdpp/checkpoint.h"
#include "shdpp/corpus.h"
#include "shdpp/errors.h"
#include "shdpp/inference.h"

namespace shdpp {
namespace {

constexpr const char* kSummaryFormat = "shdpp-summary";
constexpr int kSummaryFormatVersion = 1;

enum class LogLevel { kQuiet, kError, kWarn, kInfo, kDebug };

LogLevel LevelFromEnvironment() {
  const char* env = std::getenv("SHDPP_LOG");
  if (env == nullptr) return LogLevel::kInfo;
  const std::string_view v(env);
  if (v == "quiet" || v == "0") return LogLevel::kQuiet;
  if (v == "error" || v == "1") return LogLevel::kError;
  if (v == "warn" || v == "2") return LogLevel::kWarn;
  if (v == "debug" || v == "4") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err), level_(LevelFromEnvironment()) {}

  void Info(const std::string& msg) const { Emit(LogLevel::kInfo, msg); }
  void Debug(const std::string& msg) const { Emit(LogLevel::kDebug, msg); }
  // Always printed, whatever the level.
  void Error(const std::string& msg) const {
    err_ << "shdpp: error: " << msg << '\n';
  }

 private:
  void Emit(LogLevel level, const std::string& msg) const {
    if (level <= level_) err_ << msg << '\n';
  }

  std::ostream& err_;
  LogLevel level_;
};

struct GenerateArgs {
  CorpusSpec spec;
  std::string out;
};

struct TrainArgs {
  std::string data;
  std::string mode = "patient";
  std::string method = "shdpp";
  int segment_size = kDefaultSegmentSize;
  int rank = kDefaultRank;
  std::vector<double> lambda_grid = {0.001, 0.01, 0.1};
  TrainConfig train;
  int queries_per_video = 20;
  std::string out;
};

struct SummarizeArgs {
  std::string data;
  std::string ckpt;
  std::string video_id;
  std::string query;
  std::string method = "shdpp";
  std::string mode = "patient";
  int budget = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct BenchmarkArgs {
  std::string data;
  std::string mode = "patient";
  int arity = 2;
  std::string methods = "shdpp,seqdpp,dpp,ranking,sampling";
  int segment_size = kDefaultSegmentSize;
  int rank = kDefaultRank;
  std::vector<double> lambda_grid = {0.01};
  TrainConfig train;
  int train_queries = 20;
  int test_queries = 40;
  std::uint64_t seed = 0;
  int skip = kDefaultSkipDistance;
  std::vector<int> sizes = {4, 6, 8, 10, 12};
  std::string out;
};

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

void RequireSameLexicon(std::span<const VideoRecord> videos) {
  if (videos.empty()) throw InputError("data file holds no videos");
  for (const VideoRecord& v : videos) {
    if (!(v.lexicon == videos.front().lexicon)) {
      throw InputError("video " + v.id + " uses a different lexicon");
    }
  }
}

std::string Fixed(double x, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

void RunGenerate(const GenerateArgs& a, std::ostream& out, const Log& log) {
  log.Info("generating " + std::to_string(a.spec.videos) + " videos");
  const std::vector<VideoRecord> videos = GenerateCorpus(a.spec);
  WriteCorpus(a.out, videos);
  int shots = 0;
  double summary = 0.0;
  for (const VideoRecord& v : videos) {
    shots += v.num_shots();
    for (const IndexSubset& u : v.user_summaries) summary += u.size();
  }
  summary /= videos.size() * kUserSummaries;
  out << "videos " << videos.size() << "\nshots " << shots << "\nlexicon "
      << a.spec.lexicon_size << "\nmean_label_run "
      << Fixed(MeanLabelRunLength(videos), 3) << "\nmean_user_summary "
      << Fixed(summary, 2) << "\nwrote " << a.out << '\n';
}

void RunTrain(TrainArgs a, std::ostream& out, const Log& log) {
  const Method method = ParseMethod(a.method);
  if (!IsLearned(method)) {
    throw InputError(a.method + " has no parameters to train");
  }
  const UserMode mode = ParseUserMode(a.mode);
  if (a.segment_size < 1) throw InputError("segment size must be positive");
  if (a.rank < 1) throw InputError("rank must be positive");
  const std::vector<VideoRecord> videos = ReadCorpus(a.data);
  RequireSameLexicon(videos);

  std::vector<PreparedVideo> prepared;
  for (const VideoRecord& v : videos) {
    log.Debug("oracle for " + v.id);
    prepared.push_back(PrepareVideo(v));
  }
  ExampleOptions options;
  options.mode = mode;
  options.segment_size = a.segment_size;
  options.queries_per_video = a.queries_per_video;
  options.seed = a.train.seed;
  const std::vector<TrainingExample> examples =
      BuildTrainingExamples(method, prepared, options);
  if (examples.empty()) throw InputError("no training queries in " + a.data);
  log.Info("training " + a.method + " on " + std::to_string(examples.size()) +
           " sequences");

  a.train.lambda_grid = a.lambda_grid;
  const Lexicon& lexicon = videos.front().lexicon;
  const TrainReport report =
      Fit(examples, FactorShapes(method, lexicon.size(), a.rank), a.train);

  Checkpoint ckpt;
  ckpt.method = ToString(method);
  ckpt.rank = a.rank;
  ckpt.concept_dim = lexicon.size();
  ckpt.segment_size = a.segment_size;
  ckpt.mode = ToString(mode);
  ckpt.lexicon_hash = LexiconHash(lexicon);
  ckpt.lambda1 = report.lambda1;
  ckpt.lambda2 = report.lambda2;
  ckpt.seed = a.train.seed;
  ckpt.factors = report.factors;
  SaveCheckpoint(a.out, ckpt);

  out << "method " << ckpt.method << "\nlambda1 " << report.lambda1
      << "\nlambda2 " << report.lambda2 << "\nrestart "
      << report.chosen_restart << "\niterations "
      << report.objective_trace.size() - 1 << "\nobjective "
      << Fixed(report.objective_trace.back(), 6) << "\nwrote " << a.out
      << '\n';
}

const VideoRecord& FindVideo(std::span<const VideoRecord> videos,
                             const std::string& id) {
  for (const VideoRecord& v : videos) {
    if (v.id == id) return v;
  }
  throw InputError("no video " + id);
}

std::string JoinText(const std::vector<std::string>& words) {
  std::string s;
  for (const std::string& w : words) {
    if (!s.empty()) s += ' ';
    s += w;
  }
  return s;
}

void RunSummarize(const SummarizeArgs& a, std::ostream& out, const Log& log) {
  const Method method = ParseMethod(a.method);
  const UserMode mode = ParseUserMode(a.mode);
  if (a.budget < 0) throw InputError("budget must be >= 0");
  const std::vector<VideoRecord> videos = ReadCorpus(a.data);
  const VideoRecord& video = FindVideo(videos, a.video_id);
  const Query query = Query::Parse(a.query, video.lexicon);

  Factors factors;
  int segment_size = kDefaultSegmentSize;
  if (IsLearned(method)) {
    if (a.ckpt.empty()) throw InputError(a.method + " needs --ckpt");
    const Checkpoint ckpt = LoadCheckpoint(a.ckpt);
    if (ckpt.method != ToString(method)) {
      throw InputError("checkpoint holds a " + ckpt.method + " model, not " +
                       a.method);
    }
    if (ckpt.lexicon_hash != LexiconHash(video.lexicon) ||
        ckpt.concept_dim != video.lexicon.size()) {
      throw InputError("checkpoint was trained on a different lexicon");
    }
    factors = ckpt.factors;
    segment_size = ckpt.segment_size;
  }

  log.Debug("preparing " + video.id);
  const PreparedVideo prepared = PrepareVideo(video);
  int budget = a.budget;
  if (budget == 0) {
    budget = BuildGroundtruth(video, prepared.oracle, query, mode).shots.size();
  }
  const SystemSummary s =
      RunMethod(method, factors, prepared, query, segment_size, budget, a.seed);

  IndexSubset z;
  if (s.layered) z = s.labels.ZShots();
  std::ostringstream doc;
  doc << "format " << kSummaryFormat << ' ' << kSummaryFormatVersion
      << "\nvideo " << video.id << "\nquery " << query.label() << "\nmethod "
      << ToString(method) << "\nselected " << s.shots.size() << '\n';
  for (int id : s.shots) {
    const char* layer = !s.layered ? "-" : z.Contains(id) ? "Z" : "Y";
    doc << id << ' ' << layer << ' ' << JoinText(video.shots[id].text) << '\n';
  }
  if (a.out.empty()) {
    out << doc.str();
  } else {
    WriteText(a.out, doc.str());
    out << "selected " << s.shots.size() << "\nwrote " << a.out << '\n';
  }
}

BenchmarkConfig ToConfig(BenchmarkArgs a) {
  BenchmarkConfig c;
  c.mode = ParseUserMode(a.mode);
  c.test_arity = a.arity;
  c.segment_size = a.segment_size;
  c.rank = a.rank;
  c.methods = ParseMethods(a.methods);
  a.train.lambda_grid = a.lambda_grid;
  a.train.seed = a.seed;
  c.train = a.train;
  c.train_queries_per_video = a.train_queries;
  c.test_queries_per_video = a.test_queries;
  c.seed = a.seed;
  c.skip = a.skip;
  return c;
}

void ReportErrors(const BenchmarkResult& r, const Log& log) {
  for (const MethodRow& row : r.rows) {
    for (const std::string& e : row.errors) {
      log.Info(std::string(ToString(row.method)) + ": " + e);
    }
  }
}

void RunBenchmarkCommand(const BenchmarkArgs& a, std::ostream& out,
                         const Log& log) {
  const BenchmarkConfig config = ToConfig(a);
  const std::vector<VideoRecord> videos = ReadCorpus(a.data);
  RequireSameLexicon(videos);
  log.Info("benchmark over " + std::to_string(videos.size()) + " folds");
  const BenchmarkResult r = RunBenchmark(videos, config);
  ReportErrors(r, log);
  WriteText(a.out, FormatDsv(r));
  out << FormatTable(r) << "wrote " << a.out << '\n';
}

void RunSweep(const BenchmarkArgs& a, std::ostream& out, const Log& log) {
  const BenchmarkConfig config = ToConfig(a);
  if (a.sizes.empty()) throw InputError("no segment sizes");
  for (int s : a.sizes) {
    if (s < 1) throw InputError("segment sizes must be positive");
  }
  const std::vector<VideoRecord> videos = ReadCorpus(a.data);
  RequireSameLexicon(videos);
  std::vector<SweepPoint> sweep;
  for (int size : a.sizes) {
    log.Info("segment size " + std::to_string(size));
    sweep.push_back(SegmentSizeSweep(videos, config, {size}).front());
    ReportErrors(sweep.back().result, log);
  }
  const std::string text = FormatSweep(sweep);
  WriteText(a.out, text);
  out << text << "wrote " << a.out << '\n';
}

void AddTrainingOptions(CLI::App* cmd, TrainConfig& t) {
  cmd->add_option("--restarts", t.restarts, "random restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iters", t.max_iters, "ascent iterations per fit")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--step-size", t.step_size, "initial ascent step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--rel-tol", t.rel_tol, "relative objective change to stop")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--init-sigma", t.init_sigma, "initial factor scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void AddBenchmarkOptions(CLI::App* cmd, BenchmarkArgs& a) {
  cmd->add_option("--data", a.data, "corpus file")->required();
  cmd->add_option("--mode", a.mode, "patient or impatient")
      ->check(CLI::IsMember({"patient", "impatient"}))
      ->capture_default_str();
  cmd->add_option("--arity", a.arity, "test query arity")
      ->check(CLI::IsMember({2, 3}))
      ->capture_default_str();
  cmd->add_option("--methods", a.methods, "comma-separated methods")
      ->capture_default_str();
  cmd->add_option("--segment-size", a.segment_size, "shots per ground set")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--rank", a.rank, "rows of W and V")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--lambda-grid", a.lambda_grid, "regularization grid")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--train-queries", a.train_queries,
                  "training queries per video (0 = all)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--test-queries", a.test_queries,
                  "test queries per video (0 = all)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "seed")->capture_default_str();
  cmd->add_option("--skip", a.skip, "ROUGE-SU skip distance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--out", a.out, "output file")->required();
  a.train.restarts = 1;
  AddTrainingOptions(cmd, a.train);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  const Log log(err);
  CLI::App app{"Query-focused video summarization with sequential "
               "hierarchical DPPs",
               "shdpp"};
  app.set_config("--config", "", "TOML or INI file with option defaults");
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "write a synthetic corpus");
  generate->add_option("--videos", gen.spec.videos, "number of videos")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate->add_option("--shots-per-video", gen.spec.shots_per_video,
                       "shots per video")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate->add_option("--lexicon-size", gen.spec.lexicon_size,
                       "concepts in the lexicon")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate->add_option("--seed", gen.spec.seed, "seed")->capture_default_str();
  generate->add_option("--out", gen.out, "corpus file")->required();

  TrainArgs tr;
  CLI::App* train = app.add_subcommand("train", "fit a DPP summarizer");
  train->add_option("--data", tr.data, "corpus file")->required();
  train->add_option("--mode", tr.mode, "patient or impatient")
      ->check(CLI::IsMember({"patient", "impatient"}))
      ->capture_default_str();
  train->add_option("--method", tr.method, "shdpp, seqdpp or dpp")
      ->check(CLI::IsMember({"shdpp", "seqdpp", "dpp"}))
      ->capture_default_str();
  train->add_option("--segment-size", tr.segment_size, "shots per ground set")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--rank", tr.rank, "rows of W and V")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--lambda-grid", tr.lambda_grid,
                    "regularization grid, picked by leave-one-video-out")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  train->add_option("--queries-per-video", tr.queries_per_video,
                    "training queries per video (0 = all)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  train->add_option("--seed", tr.train.seed, "seed")->capture_default_str();
  train->add_option("--out", tr.out, "checkpoint file")->required();
  AddTrainingOptions(train, tr.train);

  SummarizeArgs su;
  CLI::App* summarize =
      app.add_subcommand("summarize", "summarize one video for one query");
  summarize->add_option("--data", su.data, "corpus file")->required();
  summarize->add_option("--ckpt", su.ckpt, "checkpoint (learned methods)");
  summarize->add_option("--video-id", su.video_id, "video to summarize")
      ->required();
  summarize->add_option("--query", su.query, "concepts, e.g. car,flower")
      ->required();
  summarize->add_option("--method", su.method, "summarizer")
      ->check(CLI::IsMember({"shdpp", "seqdpp", "dpp", "ranking", "sampling"}))
      ->capture_default_str();
  summarize->add_option("--mode", su.mode,
                        "groundtruth size used as the baselines' budget")
      ->check(CLI::IsMember({"patient", "impatient"}))
      ->capture_default_str();
  summarize->add_option("--budget", su.budget,
                        "baseline budget (0 = groundtruth size)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  summarize->add_option("--seed", su.seed, "sampling seed")
      ->capture_default_str();
  summarize->add_option("--out", su.out, "summary file (default stdout)");

  BenchmarkArgs be;
  CLI::App* bench = app.add_subcommand(
      "benchmark", "leave-one-video-out comparison of all methods");
  bench->alias("evaluate");
  AddBenchmarkOptions(bench, be);

  BenchmarkArgs sw;
  CLI::App* sweep =
      app.add_subcommand("sweep", "benchmark over several segment sizes");
  AddBenchmarkOptions(sweep, sw);
  sweep->add_option("--sizes", sw.sizes, "segment sizes")
      ->delimiter(',')
      ->capture_default_str();
  sw.methods = "shdpp";

  std::vector<std::string> argv_store;
  argv_store.push_back("shdpp");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    log.Error(std::string(e.what()) + " (see --help)");
    return kExitUsage;
  }

  try {
    if (*generate) RunGenerate(gen, out, log);
    if (*train) RunTrain(tr, out, log);
    if (*summarize) RunSummarize(su, out, log);
    if (*bench) RunBenchmarkCommand(be, out, log);
    if (*sweep) RunSweep(sw, out, log);
  } catch (const InputError& e) {
    log.Error(e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    log.Error(e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    log.Error(e.what());
    return kExitFailure;
  }
  return kExitOk;
}

int RunCli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace shdpp
