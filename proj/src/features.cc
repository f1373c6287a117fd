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

#include "shdpp/features.h"

#include <algorithm>
#include <cmath>

#include "shdpp/errors.h"

namespace shdpp {

Lexicon::Lexicon(std::vector<std::string> concepts)
    : concepts_(std::move(concepts)) {
  if (concepts_.empty()) throw InputError("lexicon is empty");
  for (int i = 0; i < size(); ++i) {
    if (concepts_[i].empty()) throw InputError("empty concept name");
    if (!index_.emplace(concepts_[i], i).second) {
      throw InputError("duplicate concept '" + concepts_[i] + "'");
    }
  }
}

std::optional<int> Lexicon::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Lexicon::IndexOf(std::string_view name) const {
  if (auto id = Find(name)) return *id;
  throw InputError("unknown concept '" + std::string(name) + "'");
}

std::uint64_t Lexicon::Fingerprint() const {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const std::string& c : concepts_) {
    for (unsigned char ch : c) {
      hash ^= ch;
      hash *= 0x100000001b3ull;
    }
    hash ^= '\n';
    hash *= 0x100000001b3ull;
  }
  return hash;
}

Query::Query(const std::vector<std::string>& concepts, const Lexicon& lexicon) {
  for (const std::string& c : concepts) ids_.push_back(lexicon.IndexOf(c));
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
    throw InputError("query repeats a concept");
  }
  if (ids_.size() < 2 || ids_.size() > 3) {
    throw InputError("a query has two or three concepts, got " +
                     std::to_string(ids_.size()));
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i) label_ += '+';
    label_ += lexicon.name(ids_[i]);
  }
}

Query Query::Parse(std::string_view text, const Lexicon& lexicon) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : text) {
    if (ch == ',' || ch == '+') {
      parts.push_back(current);
      current.clear();
    } else if (ch != ' ') {
      current += ch;
    }
  }
  parts.push_back(current);
  return Query(parts, lexicon);
}

bool Query::Contains(int concept_id) const {
  return std::binary_search(ids_.begin(), ids_.end(), concept_id);
}

bool Query::Matches(std::span<const int> concept_ids) const {
  return std::any_of(concept_ids.begin(), concept_ids.end(),
                     [this](int c) { return Contains(c); });
}

Vector L2Normalized(const Vector& v) {
  const double norm = v.norm();
  if (norm == 0.0) return v;
  return v / norm;
}

Vector PoolConceptScoresRaw(const std::vector<std::vector<double>>& frame_scores,
                            std::span<const int> detectors_per_concept) {
  if (frame_scores.empty()) throw InputError("shot has no keyframes");
  std::size_t columns = 0;
  for (int d : detectors_per_concept) {
    if (d < 1) throw InputError("every concept needs at least one detector");
    columns += static_cast<std::size_t>(d);
  }
  Vector mean = Vector::Zero(static_cast<int>(columns));
  for (const auto& frame : frame_scores) {
    if (frame.size() != columns) {
      throw InputError("keyframe has " + std::to_string(frame.size()) +
                       " detector scores, expected " + std::to_string(columns));
    }
    for (std::size_t j = 0; j < columns; ++j) {
      if (!(frame[j] >= 0.0 && frame[j] <= 1.0)) {
        throw InputError("detector score outside [0, 1]");
      }
      mean(static_cast<int>(j)) += frame[j];
    }
  }
  mean /= static_cast<double>(frame_scores.size());

  Vector pooled(static_cast<int>(detectors_per_concept.size()));
  int column = 0;
  for (std::size_t c = 0; c < detectors_per_concept.size(); ++c) {
    const int d = detectors_per_concept[c];
    pooled(static_cast<int>(c)) = mean.segment(column, d).maxCoeff();
    column += d;
  }
  return pooled;
}

Vector PoolConceptScores(const std::vector<std::vector<double>>& frame_scores,
                         std::span<const int> detectors_per_concept) {
  return L2Normalized(PoolConceptScoresRaw(frame_scores, detectors_per_concept));
}

double PearsonCorrelation(const Vector& a, const Vector& b) {
  if (a.size() != b.size() || a.size() == 0) {
    throw InputError("correlation needs two vectors of equal, nonzero length");
  }
  const Vector ca = a.array() - a.mean();
  const Vector cb = b.array() - b.mean();
  const double va = ca.squaredNorm();
  const double vb = cb.squaredNorm();
  if (va == 0.0 || vb == 0.0) return 0.0;
  const double r = ca.dot(cb) / std::sqrt(va * vb);
  return std::clamp(r, -1.0, 1.0);
}

std::array<double, kContextDim> ContextualVector(
    std::span<const Vector> descriptors, int frame_index) {
  const int n = static_cast<int>(descriptors.size());
  if (n == 0) throw InputError("no frame descriptors");
  if (frame_index < 0 || frame_index >= n) {
    throw InputError("frame index out of range");
  }
  const int reach = kContextWindows.back() / 2;
  // corr[k] is the correlation with the frame at offset k - reach.
  std::vector<double> corr(2 * reach + 1, 0.0);
  for (int offset = -reach; offset <= reach; ++offset) {
    const int other = frame_index + offset;
    if (offset == 0 || other < 0 || other >= n) continue;
    corr[offset + reach] =
        PearsonCorrelation(descriptors[frame_index], descriptors[other]);
  }
  std::array<double, kContextDim> out{};
  for (int w = 0; w < kContextDim; ++w) {
    const int half = kContextWindows[w] / 2;
    double sum = 0.0;
    int count = 0;
    for (int offset = -half; offset <= half; ++offset) {
      const int other = frame_index + offset;
      if (offset == 0 || other < 0 || other >= n) continue;
      sum += corr[offset + reach];
      ++count;
    }
    out[w] = count > 0 ? sum / count : 0.0;
  }
  return out;
}

Vector ShotContextualFeature(std::span<const Vector> descriptors, int first,
                             int last) {
  if (first < 0 || last > static_cast<int>(descriptors.size()) ||
      first >= last) {
    throw InputError("invalid shot frame range");
  }
  Vector mean = Vector::Zero(kContextDim);
  for (int f = first; f < last; ++f) {
    const auto v = ContextualVector(descriptors, f);
    for (int k = 0; k < kContextDim; ++k) mean(k) += v[k];
  }
  mean /= static_cast<double>(last - first);
  return L2Normalized(mean);
}

Vector ShotFeatureVector(const ShotFeatures& shot) {
  Vector f(shot.h.size() + shot.l.size());
  f << shot.h, shot.l;
  return f;
}

Vector QueryScaling(const Query& query, const Lexicon& lexicon) {
  Vector alpha = Vector::Constant(lexicon.size(), kOffQueryScale);
  for (int c : query.concept_ids()) {
    if (c >= lexicon.size()) {
      throw InputError("query concept outside the lexicon");
    }
    alpha(c) = 1.0;
  }
  return alpha;
}

Vector QueryFeature(const ShotFeatures& shot, const Query& query,
                    const Lexicon& lexicon, QueryFeatureOptions options) {
  if (shot.h.size() != lexicon.size()) {
    throw InputError("concept vector length does not match the lexicon");
  }
  Vector scaled = shot.h.cwiseProduct(QueryScaling(query, lexicon));
  if (options.renormalize) scaled = L2Normalized(scaled);
  return scaled;
}

}  // namespace shdpp
