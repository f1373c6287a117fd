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

// Synthetic annotated videos standing in for densely annotated egocentric
// footage, plus oracle summaries, query-focused groundtruth and queries.

#ifndef SHDPP_CORPUS_H_
#define SHDPP_CORPUS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shdpp/dpp.h"
#include "shdpp/features.h"
#include "shdpp/model.h"
#include "shdpp/rouge.h"

namespace shdpp {

inline constexpr char kCorpusFormat[] = "shdpp-corpus";
inline constexpr int kCorpusFormatVersion = 1;
inline constexpr int kUserSummaries = 3;

struct AnnotatedShot {
  int id = 0;
  int timestamp = 0;
  std::vector<int> concepts;  // sorted lexicon ids
  std::vector<std::string> text;
  std::vector<std::vector<double>> detector_scores;  // keyframe x detector
  std::vector<std::vector<double>> descriptors;      // frame x dim

  bool HasConcept(int c) const;
  bool Matches(const Query& query) const;
};

struct VideoRecord {
  std::string id;
  Lexicon lexicon;
  std::vector<int> detectors_per_concept;
  std::vector<AnnotatedShot> shots;
  std::vector<IndexSubset> user_summaries;

  int num_shots() const { return static_cast<int>(shots.size()); }
  // Throws InputError on any structural inconsistency.
  void Validate() const;
};

struct CorpusSpec {
  int videos = 4;
  int shots_per_video = 200;
  int lexicon_size = 20;
  std::uint64_t seed = 0;
  int detectors_per_concept = 2;
  int keyframes_per_shot = 3;
  int frames_per_shot = 4;
  int descriptor_dim = 16;
  int min_scene_length = 2;
  int max_scene_length = 6;
  double revisit_probability = 0.3;   // scene repeats an earlier one
  double empty_scene_probability = 0.2;
  double summary_scene_probability = 0.35;
  double user_noise = 0.1;  // fraction dropped and added per user

  // Throws InputError unless videos >= 2, lexicon_size >= 10 and the
  // remaining fields are in range.
  void Validate() const;
};

// The first `size` concept names: the 70-concept egocentric lexicon, then
// "conceptNN".
Lexicon DefaultLexicon(int size);

// Deterministic per spec. Labels persist over scenes of 2 to 6 shots; some
// scenes recur later with the same look and concepts.
std::vector<VideoRecord> GenerateCorpus(const CorpusSpec& spec);

// One video per line, each a self-contained JSON object. Floats round-trip.
std::string SerializeVideo(const VideoRecord& video);
VideoRecord ParseVideo(std::string_view line);
void WriteCorpus(const std::string& path, std::span<const VideoRecord> videos);
// Throws IoError when unreadable, InputError on malformed records.
std::vector<VideoRecord> ReadCorpus(const std::string& path);

// Mean length of maximal runs of consecutive shots carrying a concept,
// over all concepts and videos.
double MeanLabelRunLength(std::span<const VideoRecord> videos);

// Greedy oracle: from the empty set, repeatedly add the shot with the largest
// summed ROUGE-SU F gain against the user summaries; stop once no gain is
// positive. Ties go to the lower shot id. Texts are concatenated in time
// order.
IndexSubset OracleSummary(std::span<const std::vector<std::string>> shot_texts,
                          std::span<const IndexSubset> user_summaries,
                          int skip = kDefaultSkipDistance);
IndexSubset OracleSummary(const VideoRecord& video,
                          int skip = kDefaultSkipDistance);

// Words of the selected shots in time order.
std::vector<std::string> SummaryText(const VideoRecord& video,
                                     const IndexSubset& shots);

enum class UserMode { kPatient, kImpatient };

UserMode ParseUserMode(std::string_view text);
const char* ToString(UserMode mode);

struct GroundtruthSummary {
  IndexSubset shots;
  IndexSubset relevant;  // S^q, always within `shots`
  UserMode mode = UserMode::kPatient;
};

// Shots whose labels intersect the query.
IndexSubset MatchingShots(const VideoRecord& video, const Query& query);

// patient: oracle plus every matching shot. impatient: the oracle itself.
// In both, `relevant` is the matching part of `shots`.
GroundtruthSummary BuildGroundtruth(const VideoRecord& video,
                                    const IndexSubset& oracle,
                                    const Query& query, UserMode mode);

// z_t = relevant shots of segment t, y_t = the other groundtruth shots.
LabeledSummary GroundtruthLabels(const GroundtruthSummary& groundtruth,
                                 const Segmentation& segmentation);

// Concepts labeled on at least one oracle shot.
std::vector<int> OracleConcepts(const VideoRecord& video,
                                const IndexSubset& oracle);

// All unordered concept tuples of the given arity (2 or 3), in lexicographic
// order of concept ids. When `allowed` is non-null only those concepts are
// used.
std::vector<Query> EnumerateQueries(const Lexicon& lexicon, int arity,
                                    const std::vector<int>* allowed = nullptr);

// Per-shot features: pooled detector scores and contextual vectors over the
// video's frame sequence.
std::vector<ShotFeatures> ExtractShotFeatures(const VideoRecord& video);
// N x C concept scores before normalization.
Matrix RawConceptScores(const VideoRecord& video);

}  // namespace shdpp

#endif  // SHDPP_CORPUS_H_
