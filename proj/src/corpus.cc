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

#include "shdpp/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "shdpp/errors.h"

namespace shdpp {
namespace {

using nlohmann::json;

constexpr const char* kEgocentricConcepts[] = {
    "area",    "band",    "bathroom", "beach",     "bed",    "beer",
    "blonde",  "boat",    "book",     "box",       "building", "car",
    "card",    "cars",    "chair",    "chest",     "children", "chocolate",
    "comics",  "cross",   "cup",      "desk",      "drink",  "eggs",
    "face",    "feet",    "flowers",  "food",      "friends", "garden",
    "girl",    "glass",   "glasses",  "grass",     "hair",   "hall",
    "hands",   "hat",     "head",     "house",     "kids",   "lady",
    "legs",    "lights",  "market",   "men",       "mirror", "model",
    "mushrooms", "ocean", "office",   "park",      "phone",  "road",
    "room",    "school",  "shoes",    "sign",      "sky",    "street",
    "student", "sun",     "toy",      "toys",      "tree",   "trees",
    "wall",    "water",   "window",   "windows"};

constexpr int kSubjectWords = 12;
constexpr int kVerbWords = 24;
constexpr int kFillerWords = 200;
constexpr double kDescriptorNoise = 0.3;

// Two-syllable pseudo-words; none of them is an English concept noun, and any
// lexicon collision is dropped anyway.
std::vector<std::string> FillerVocabulary(const Lexicon& lexicon) {
  static const std::string consonants = "bdfgklmnprstvz";
  static const std::string vowels = "aeiou";
  std::vector<std::string> syllables;
  for (char c : consonants) {
    for (char v : vowels) syllables.push_back(std::string{c, v});
  }
  const int s = static_cast<int>(syllables.size());
  std::vector<std::string> words;
  std::set<std::string> seen;
  for (int r = 0; static_cast<int>(words.size()) < kFillerWords; ++r) {
    for (int i = 0; i < s && static_cast<int>(words.size()) < kFillerWords; ++i) {
      std::string w = syllables[i] + syllables[(i * 13 + r * 29 + 5) % s];
      if (r >= 4) w += syllables[(i + r) % s];
      if (lexicon.Find(w) || !seen.insert(w).second) continue;
      words.push_back(std::move(w));
    }
  }
  return words;
}

double BetaDraw(double a, double b, std::mt19937_64& rng) {
  std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

struct Scene {
  std::vector<int> concepts;
  Vector prototype;
  std::vector<std::string> context;
};

Scene NewScene(const CorpusSpec& spec, const std::vector<std::string>& filler,
               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> concept_pick(0, spec.lexicon_size - 1);
  std::uniform_int_distribution<int> context_pick(kSubjectWords + kVerbWords,
                                                  kFillerWords - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  Scene scene;
  if (unit(rng) >= spec.empty_scene_probability) {
    const int count = unit(rng) < 0.5 ? 1 : 2;
    while (static_cast<int>(scene.concepts.size()) < count) {
      const int c = concept_pick(rng);
      if (std::find(scene.concepts.begin(), scene.concepts.end(), c) ==
          scene.concepts.end()) {
        scene.concepts.push_back(c);
      }
    }
    std::sort(scene.concepts.begin(), scene.concepts.end());
  }
  scene.prototype.resize(spec.descriptor_dim);
  for (int d = 0; d < spec.descriptor_dim; ++d) scene.prototype(d) = normal(rng);
  for (int k = 0; k < 3; ++k) scene.context.push_back(filler[context_pick(rng)]);
  return scene;
}

AnnotatedShot MakeShot(int id, const Scene& scene, const CorpusSpec& spec,
                       const Lexicon& lexicon,
                       const std::vector<std::string>& filler,
                       std::mt19937_64& rng) {
  std::uniform_int_distribution<int> subject(0, kSubjectWords - 1);
  std::uniform_int_distribution<int> verb(kSubjectWords,
                                          kSubjectWords + kVerbWords - 1);
  std::uniform_int_distribution<int> context(kSubjectWords + kVerbWords,
                                             kFillerWords - 1);
  std::normal_distribution<double> noise(0.0, kDescriptorNoise);

  AnnotatedShot shot;
  shot.id = id;
  shot.timestamp = id;
  shot.concepts = scene.concepts;
  shot.text.push_back(filler[subject(rng)]);
  shot.text.push_back(filler[verb(rng)]);
  for (int c : scene.concepts) shot.text.push_back(lexicon.name(c));
  shot.text.insert(shot.text.end(), scene.context.begin(), scene.context.end());
  shot.text.push_back(filler[context(rng)]);

  for (int k = 0; k < spec.keyframes_per_shot; ++k) {
    std::vector<double> row;
    for (int c = 0; c < spec.lexicon_size; ++c) {
      const bool present = shot.HasConcept(c);
      for (int d = 0; d < spec.detectors_per_concept; ++d) {
        row.push_back(present ? BetaDraw(8, 2, rng) : BetaDraw(2, 8, rng));
      }
    }
    shot.detector_scores.push_back(std::move(row));
  }
  for (int f = 0; f < spec.frames_per_shot; ++f) {
    std::vector<double> row(spec.descriptor_dim);
    for (int d = 0; d < spec.descriptor_dim; ++d) {
      row[d] = scene.prototype(d) + noise(rng);
    }
    shot.descriptors.push_back(std::move(row));
  }
  return shot;
}

// Drops and adds round(noise * |planted|) shots.
IndexSubset PerturbSummary(const IndexSubset& planted, int num_shots,
                           double noise, std::mt19937_64& rng) {
  std::vector<int> keep(planted.begin(), planted.end());
  const int k = static_cast<int>(std::lround(noise * planted.size()));
  std::shuffle(keep.begin(), keep.end(), rng);
  const int drop = std::min<int>(k, static_cast<int>(keep.size()) - 1);
  keep.resize(keep.size() - std::max(drop, 0));
  std::vector<int> outside;
  for (int i = 0; i < num_shots; ++i) {
    if (!planted.Contains(i)) outside.push_back(i);
  }
  std::shuffle(outside.begin(), outside.end(), rng);
  for (int i = 0; i < std::min<int>(k, static_cast<int>(outside.size())); ++i) {
    keep.push_back(outside[i]);
  }
  return IndexSubset::FromUnsorted(std::move(keep));
}

VideoRecord GenerateVideo(const CorpusSpec& spec, const Lexicon& lexicon,
                          const std::vector<std::string>& filler, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                    static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> scene_length(spec.min_scene_length,
                                                  spec.max_scene_length);

  VideoRecord video;
  video.id = "video" + std::to_string(index);
  video.lexicon = lexicon;
  video.detectors_per_concept.assign(spec.lexicon_size,
                                     spec.detectors_per_concept);
  std::vector<Scene> history;
  std::vector<int> planted;
  const int n = spec.shots_per_video;
  while (video.num_shots() < n) {
    const int length = std::min(scene_length(rng), n - video.num_shots());
    if (!history.empty() && unit(rng) < spec.revisit_probability) {
      std::uniform_int_distribution<int> pick(
          0, static_cast<int>(history.size()) - 1);
      Scene again = history[pick(rng)];
      history.push_back(std::move(again));
    } else {
      history.push_back(NewScene(spec, filler, rng));
    }
    const Scene& scene = history.back();
    const int first = video.num_shots();
    for (int k = 0; k < length; ++k) {
      video.shots.push_back(
          MakeShot(first + k, scene, spec, lexicon, filler, rng));
    }
    if (unit(rng) < spec.summary_scene_probability) {
      std::uniform_int_distribution<int> offset(0, length - 1);
      planted.push_back(first + offset(rng));
      if (length >= 5) planted.push_back(first + offset(rng));
    }
  }
  if (planted.empty()) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    planted.push_back(pick(rng));
  }
  const IndexSubset truth = IndexSubset::FromUnsorted(std::move(planted));
  for (int u = 0; u < kUserSummaries; ++u) {
    video.user_summaries.push_back(PerturbSummary(truth, n, spec.user_noise, rng));
  }
  return video;
}

std::string JoinWords(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

void RequireRange(bool ok, const std::string& what) {
  if (!ok) throw InputError("corpus spec: " + what);
}

}  // namespace

bool AnnotatedShot::HasConcept(int c) const {
  return std::binary_search(concepts.begin(), concepts.end(), c);
}

bool AnnotatedShot::Matches(const Query& query) const {
  return query.Matches(concepts);
}

void VideoRecord::Validate() const {
  const std::string where = "video " + id + ": ";
  if (lexicon.size() == 0) throw InputError(where + "empty lexicon");
  if (static_cast<int>(detectors_per_concept.size()) != lexicon.size()) {
    throw InputError(where + "detectors_per_concept length != lexicon size");
  }
  int detectors = 0;
  for (int d : detectors_per_concept) {
    if (d < 1) throw InputError(where + "concept without detectors");
    detectors += d;
  }
  if (shots.empty()) throw InputError(where + "no shots");
  std::size_t descriptor_dim = shots[0].descriptors.empty()
                                   ? 0
                                   : shots[0].descriptors[0].size();
  for (int i = 0; i < num_shots(); ++i) {
    const AnnotatedShot& s = shots[i];
    const std::string at = where + "shot " + std::to_string(i) + ": ";
    if (s.id != i) throw InputError(at + "ids must be 0..N-1 in order");
    if (!std::is_sorted(s.concepts.begin(), s.concepts.end()) ||
        std::adjacent_find(s.concepts.begin(), s.concepts.end()) !=
            s.concepts.end()) {
      throw InputError(at + "concepts must be sorted and distinct");
    }
    for (int c : s.concepts) {
      if (c < 0 || c >= lexicon.size()) throw InputError(at + "unknown concept");
    }
    if (s.detector_scores.empty() || s.descriptors.empty()) {
      throw InputError(at + "missing detector scores or descriptors");
    }
    for (const auto& row : s.detector_scores) {
      if (static_cast<int>(row.size()) != detectors) {
        throw InputError(at + "detector row has wrong width");
      }
    }
    for (const auto& row : s.descriptors) {
      if (row.size() != descriptor_dim || descriptor_dim == 0) {
        throw InputError(at + "descriptor rows must share one nonzero width");
      }
    }
  }
  if (static_cast<int>(user_summaries.size()) != kUserSummaries) {
    throw InputError(where + "expected 3 user summaries");
  }
  for (const IndexSubset& u : user_summaries) {
    if (u.empty() || !u.FitsIn(num_shots())) {
      throw InputError(where + "user summaries must be nonempty shot subsets");
    }
  }
}

void CorpusSpec::Validate() const {
  RequireRange(videos >= 2, "need at least 2 videos");
  RequireRange(shots_per_video >= 1, "shots per video must be positive");
  RequireRange(lexicon_size >= 10, "lexicon needs at least 10 concepts");
  RequireRange(detectors_per_concept >= 1, "detectors per concept >= 1");
  RequireRange(keyframes_per_shot >= 1, "keyframes per shot >= 1");
  RequireRange(frames_per_shot >= 1, "frames per shot >= 1");
  RequireRange(descriptor_dim >= 2, "descriptor dim >= 2");
  RequireRange(min_scene_length >= 1 && max_scene_length >= min_scene_length,
               "scene lengths");
  for (double p : {revisit_probability, empty_scene_probability,
                   summary_scene_probability, user_noise}) {
    RequireRange(p >= 0.0 && p <= 1.0, "probabilities must lie in [0, 1]");
  }
}

Lexicon DefaultLexicon(int size) {
  if (size < 1) throw InputError("lexicon size must be positive");
  std::vector<std::string> names;
  const int known = static_cast<int>(std::size(kEgocentricConcepts));
  for (int i = 0; i < size; ++i) {
    if (i < known) {
      names.emplace_back(kEgocentricConcepts[i]);
    } else {
      names.push_back("concept" + std::to_string(i));
    }
  }
  return Lexicon(std::move(names));
}

std::vector<VideoRecord> GenerateCorpus(const CorpusSpec& spec) {
  spec.Validate();
  const Lexicon lexicon = DefaultLexicon(spec.lexicon_size);
  const std::vector<std::string> filler = FillerVocabulary(lexicon);
  std::vector<VideoRecord> videos;
  for (int v = 0; v < spec.videos; ++v) {
    videos.push_back(GenerateVideo(spec, lexicon, filler, v));
  }
  return videos;
}

std::string SerializeVideo(const VideoRecord& video) {
  json j;
  j["format"] = kCorpusFormat;
  j["version"] = kCorpusFormatVersion;
  j["video_id"] = video.id;
  j["lexicon"] = video.lexicon.concepts();
  j["detectors_per_concept"] = video.detectors_per_concept;
  json shots = json::array();
  for (const AnnotatedShot& s : video.shots) {
    std::vector<std::string> names;
    for (int c : s.concepts) names.push_back(video.lexicon.name(c));
    shots.push_back({{"id", s.id},
                     {"timestamp", s.timestamp},
                     {"concepts", names},
                     {"text", JoinWords(s.text)},
                     {"detector_scores", s.detector_scores},
                     {"descriptors", s.descriptors}});
  }
  j["shots"] = std::move(shots);
  json users = json::array();
  for (const IndexSubset& u : video.user_summaries) users.push_back(u.indices());
  j["user_summaries"] = std::move(users);
  return j.dump();
}

VideoRecord ParseVideo(std::string_view line) {
  VideoRecord video;
  try {
    const json j = json::parse(line);
    if (j.at("format") != kCorpusFormat) {
      throw InputError("not a corpus record");
    }
    if (j.at("version") != kCorpusFormatVersion) {
      throw InputError("unsupported corpus version " + j.at("version").dump());
    }
    video.id = j.at("video_id").get<std::string>();
    video.lexicon = Lexicon(j.at("lexicon").get<std::vector<std::string>>());
    video.detectors_per_concept =
        j.at("detectors_per_concept").get<std::vector<int>>();
    for (const json& s : j.at("shots")) {
      AnnotatedShot shot;
      shot.id = s.at("id").get<int>();
      shot.timestamp = s.at("timestamp").get<int>();
      for (const json& name : s.at("concepts")) {
        shot.concepts.push_back(video.lexicon.IndexOf(name.get<std::string>()));
      }
      std::sort(shot.concepts.begin(), shot.concepts.end());
      shot.text = Tokenize(s.at("text").get<std::string>());
      shot.detector_scores =
          s.at("detector_scores").get<std::vector<std::vector<double>>>();
      shot.descriptors = s.at("descriptors").get<std::vector<std::vector<double>>>();
      video.shots.push_back(std::move(shot));
    }
    for (const json& u : j.at("user_summaries")) {
      video.user_summaries.push_back(IndexSubset::FromUnsorted(u.get<std::vector<int>>()));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed corpus record: ") + e.what());
  }
  video.Validate();
  return video;
}

void WriteCorpus(const std::string& path, std::span<const VideoRecord> videos) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const VideoRecord& v : videos) out << SerializeVideo(v) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

std::vector<VideoRecord> ReadCorpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::vector<VideoRecord> videos;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      videos.push_back(ParseVideo(line));
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  if (videos.empty()) throw InputError(path + ": no videos");
  return videos;
}

double MeanLabelRunLength(std::span<const VideoRecord> videos) {
  long runs = 0, total = 0;
  for (const VideoRecord& v : videos) {
    for (int c = 0; c < v.lexicon.size(); ++c) {
      int length = 0;
      for (const AnnotatedShot& s : v.shots) {
        if (s.HasConcept(c)) {
          ++length;
        } else if (length > 0) {
          ++runs;
          total += length;
          length = 0;
        }
      }
      if (length > 0) {
        ++runs;
        total += length;
      }
    }
  }
  return runs ? static_cast<double>(total) / runs : 0.0;
}

IndexSubset OracleSummary(std::span<const std::vector<std::string>> shot_texts,
                          std::span<const IndexSubset> user_summaries,
                          int skip) {
  const int n = static_cast<int>(shot_texts.size());
  Vocabulary vocab;
  std::vector<std::vector<int>> words;
  for (const auto& t : shot_texts) words.push_back(vocab.Encode(t));

  auto concat = [&](auto&& include) {
    std::vector<int> seq;
    for (int i = 0; i < n; ++i) {
      if (include(i)) seq.insert(seq.end(), words[i].begin(), words[i].end());
    }
    return seq;
  };
  std::vector<std::vector<std::uint64_t>> refs;
  for (const IndexSubset& u : user_summaries) {
    if (!u.FitsIn(n)) throw InputError("user summary refers to unknown shots");
    refs.push_back(SuUnits(concat([&](int i) { return u.Contains(i); }), skip));
  }

  std::vector<char> chosen(n, 0);
  std::vector<double> current(refs.size(), 0.0);
  while (true) {
    int best = -1;
    double best_gain = 0.0;
    std::vector<double> best_scores;
    for (int cand = 0; cand < n; ++cand) {
      if (chosen[cand]) continue;
      const std::vector<std::uint64_t> units = SuUnits(
          concat([&](int i) { return chosen[i] || i == cand; }), skip);
      double gain = 0.0;
      std::vector<double> scores;
      for (std::size_t u = 0; u < refs.size(); ++u) {
        scores.push_back(ScoreUnits(units, refs[u]).f_measure);
        gain += scores.back() - current[u];
      }
      if (gain > best_gain) {
        best = cand;
        best_gain = gain;
        best_scores = std::move(scores);
      }
    }
    if (best < 0) break;
    chosen[best] = 1;
    current = std::move(best_scores);
  }
  std::vector<int> ids;
  for (int i = 0; i < n; ++i) {
    if (chosen[i]) ids.push_back(i);
  }
  return IndexSubset(std::move(ids));
}

IndexSubset OracleSummary(const VideoRecord& video, int skip) {
  std::vector<std::vector<std::string>> texts;
  for (const AnnotatedShot& s : video.shots) texts.push_back(s.text);
  return OracleSummary(texts, video.user_summaries, skip);
}

std::vector<std::string> SummaryText(const VideoRecord& video,
                                     const IndexSubset& shots) {
  std::vector<std::string> words;
  for (int i : shots) {
    if (i < 0 || i >= video.num_shots()) throw InputError("shot id out of range");
    words.insert(words.end(), video.shots[i].text.begin(),
                 video.shots[i].text.end());
  }
  return words;
}

UserMode ParseUserMode(std::string_view text) {
  if (text == "patient") return UserMode::kPatient;
  if (text == "impatient") return UserMode::kImpatient;
  throw InputError("mode must be patient or impatient, got '" +
                   std::string(text) + "'");
}

const char* ToString(UserMode mode) {
  return mode == UserMode::kPatient ? "patient" : "impatient";
}

IndexSubset MatchingShots(const VideoRecord& video, const Query& query) {
  std::vector<int> ids;
  for (const AnnotatedShot& s : video.shots) {
    if (s.Matches(query)) ids.push_back(s.id);
  }
  return IndexSubset(std::move(ids));
}

GroundtruthSummary BuildGroundtruth(const VideoRecord& video,
                                    const IndexSubset& oracle,
                                    const Query& query, UserMode mode) {
  if (!oracle.FitsIn(video.num_shots())) {
    throw InputError("oracle refers to unknown shots");
  }
  for (int c : query.concept_ids()) {
    if (c >= video.lexicon.size()) throw InputError("query outside lexicon");
  }
  const IndexSubset matching = MatchingShots(video, query);
  GroundtruthSummary gt;
  gt.mode = mode;
  gt.shots = mode == UserMode::kPatient ? Union(oracle, matching) : oracle;
  gt.relevant = Intersection(gt.shots, matching);
  return gt;
}

LabeledSummary GroundtruthLabels(const GroundtruthSummary& groundtruth,
                                 const Segmentation& segmentation) {
  LabeledSummary labels;
  for (const IndexSubset& g : segmentation.segments) {
    StepLabels step;
    step.z = Intersection(g, groundtruth.relevant);
    step.y = Difference(Intersection(g, groundtruth.shots), step.z);
    labels.steps.push_back(std::move(step));
  }
  return labels;
}

std::vector<int> OracleConcepts(const VideoRecord& video,
                                const IndexSubset& oracle) {
  std::set<int> found;
  for (int i : oracle) {
    found.insert(video.shots.at(i).concepts.begin(),
                 video.shots.at(i).concepts.end());
  }
  return {found.begin(), found.end()};
}

std::vector<Query> EnumerateQueries(const Lexicon& lexicon, int arity,
                                    const std::vector<int>* allowed) {
  if (arity != 2 && arity != 3) throw InputError("query arity must be 2 or 3");
  std::vector<int> pool;
  if (allowed) {
    std::set<int> s(allowed->begin(), allowed->end());
    pool.assign(s.begin(), s.end());
  } else {
    for (int c = 0; c < lexicon.size(); ++c) pool.push_back(c);
  }
  const int m = static_cast<int>(pool.size());
  std::vector<Query> out;
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      if (arity == 2) {
        out.emplace_back(std::vector<std::string>{lexicon.name(pool[a]),
                                                  lexicon.name(pool[b])},
                         lexicon);
        continue;
      }
      for (int c = b + 1; c < m; ++c) {
        out.emplace_back(
            std::vector<std::string>{lexicon.name(pool[a]), lexicon.name(pool[b]),
                                     lexicon.name(pool[c])},
            lexicon);
      }
    }
  }
  return out;
}

std::vector<ShotFeatures> ExtractShotFeatures(const VideoRecord& video) {
  std::vector<Vector> frames;
  std::vector<int> starts;
  for (const AnnotatedShot& s : video.shots) {
    starts.push_back(static_cast<int>(frames.size()));
    for (const auto& row : s.descriptors) {
      frames.push_back(Eigen::Map<const Vector>(row.data(), row.size()));
    }
  }
  starts.push_back(static_cast<int>(frames.size()));
  std::vector<ShotFeatures> out;
  for (int i = 0; i < video.num_shots(); ++i) {
    ShotFeatures f;
    f.h = PoolConceptScores(video.shots[i].detector_scores,
                            video.detectors_per_concept);
    f.l = ShotContextualFeature(frames, starts[i], starts[i + 1]);
    out.push_back(std::move(f));
  }
  return out;
}

Matrix RawConceptScores(const VideoRecord& video) {
  Matrix raw(video.num_shots(), video.lexicon.size());
  for (int i = 0; i < video.num_shots(); ++i) {
    raw.row(i) = PoolConceptScoresRaw(video.shots[i].detector_scores,
                                      video.detectors_per_concept)
                     .transpose();
  }
  return raw;
}

}  // namespace shdpp
