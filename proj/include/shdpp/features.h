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

// Shot-level feature construction: pooled concept-detector scores h, the
// 6-D contextual mean-correlation vector l, their concatenation f = [h; l],
// and the query-scaled concept vector f(q) = h .* alpha(q).

#ifndef SHDPP_FEATURES_H_
#define SHDPP_FEATURES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shdpp/dpp.h"

namespace shdpp {

// Temporal window sizes for the contextual feature.
inline constexpr std::array<int, 6> kContextWindows = {5, 7, 9, 11, 13, 15};
inline constexpr int kContextDim = static_cast<int>(kContextWindows.size());

// alpha(q) entry for concepts outside the query.
inline constexpr double kOffQueryScale = 0.5;

class Lexicon {
 public:
  Lexicon() = default;
  // Throws InputError on an empty list, an empty name, or duplicates.
  explicit Lexicon(std::vector<std::string> concepts);

  int size() const { return static_cast<int>(concepts_.size()); }
  const std::vector<std::string>& concepts() const { return concepts_; }
  const std::string& name(int i) const { return concepts_[i]; }

  std::optional<int> Find(std::string_view name) const;
  // Throws InputError for an unknown concept.
  int IndexOf(std::string_view name) const;

  // FNV-1a over the ordered concept names.
  std::uint64_t Fingerprint() const;

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.concepts_ == b.concepts_;
  }

 private:
  std::vector<std::string> concepts_;
  std::unordered_map<std::string, int> index_;
};

// A user query: two or three distinct lexicon concepts.
class Query {
 public:
  Query() = default;
  // Throws InputError for unknown or repeated concepts, or a size outside
  // {2, 3}.
  Query(const std::vector<std::string>& concepts, const Lexicon& lexicon);
  // Accepts "car,flower" or "car+flower".
  static Query Parse(std::string_view text, const Lexicon& lexicon);

  // Ascending lexicon indices.
  const std::vector<int>& concept_ids() const { return ids_; }
  // Names in lexicon order joined by '+'.
  const std::string& label() const { return label_; }

  bool Contains(int concept_id) const;
  // True when any of `concept_ids` is in the query.
  bool Matches(std::span<const int> concept_ids) const;

  friend bool operator==(const Query& a, const Query& b) {
    return a.ids_ == b.ids_;
  }

 private:
  std::vector<int> ids_;
  std::string label_;
};

struct ShotFeatures {
  Vector h;  // l2-normalized concept scores, one per lexicon concept
  Vector l;  // l2-normalized contextual vector, kContextDim entries
};

// Returns `v / ||v||`, or `v` itself when it is zero.
Vector L2Normalized(const Vector& v);

// Average each detector column over the keyframes, then max over each
// concept's detectors. `frame_scores[f]` lists one score per (concept,
// detector) pair, concept-major, with `detectors_per_concept[c]` columns for
// concept c. Throws InputError on empty input, ragged rows, or scores outside
// [0, 1].
Vector PoolConceptScoresRaw(const std::vector<std::vector<double>>& frame_scores,
                            std::span<const int> detectors_per_concept);
// As above, followed by l2 normalization.
Vector PoolConceptScores(const std::vector<std::vector<double>>& frame_scores,
                         std::span<const int> detectors_per_concept);

// Pearson correlation; 0 when either vector has zero variance.
double PearsonCorrelation(const Vector& a, const Vector& b);

// Mean correlation between frame `frame_index` and every other frame inside
// each centered window of kContextWindows, clipped at the sequence ends.
// Entries are in [-1, 1]; a window with no neighbours contributes 0.
std::array<double, kContextDim> ContextualVector(
    std::span<const Vector> descriptors, int frame_index);

// Contextual vectors of frames [first, last) averaged, then l2-normalized.
Vector ShotContextualFeature(std::span<const Vector> descriptors, int first,
                             int last);

// f = [h; l].
Vector ShotFeatureVector(const ShotFeatures& shot);

// alpha(q): 1 on query concepts, kOffQueryScale elsewhere.
Vector QueryScaling(const Query& query, const Lexicon& lexicon);

struct QueryFeatureOptions {
  // Re-normalize h .* alpha(q) to unit length. Off by default: the scaled
  // vector is used as is.
  bool renormalize = false;
};

// f(q) = h .* alpha(q). Throws InputError when the query refers to concepts
// outside `lexicon` or h has the wrong length.
Vector QueryFeature(const ShotFeatures& shot, const Query& query,
                    const Lexicon& lexicon, QueryFeatureOptions options = {});

}  // namespace shdpp

#endif  // SHDPP_FEATURES_H_
