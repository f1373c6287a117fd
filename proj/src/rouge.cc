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

#include "shdpp/rouge.h"

#include <algorithm>
#include <cctype>

#include "shdpp/errors.h"

namespace shdpp {
namespace {

constexpr std::uint64_t kUnigramTag = 0xFFFFFFFFull;

std::uint64_t Pack(int a, std::uint64_t b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | b;
}

}  // namespace

ScoreTriple MakeScore(double precision, double recall) {
  ScoreTriple s{precision, recall, 0.0};
  if (precision + recall > 0.0) {
    s.f_measure = 2.0 * precision * recall / (precision + recall);
  }
  return s;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

int Vocabulary::Intern(std::string_view word) {
  auto [it, inserted] =
      ids_.try_emplace(std::string(word), static_cast<int>(words_.size()));
  if (inserted) words_.emplace_back(word);
  return it->second;
}

std::vector<int> Vocabulary::Encode(std::span<const std::string> words) {
  std::vector<int> ids;
  ids.reserve(words.size());
  for (const std::string& w : words) ids.push_back(Intern(w));
  return ids;
}

std::vector<std::uint64_t> SuUnits(std::span<const int> words, int skip) {
  if (skip < 0) throw InputError("skip distance must be non-negative");
  const int n = static_cast<int>(words.size());
  std::vector<std::uint64_t> units;
  units.reserve(static_cast<std::size_t>(n) * (skip + 2));
  for (int i = 0; i < n; ++i) {
    units.push_back(Pack(words[i], kUnigramTag));
    const int last = std::min(n - 1, i + skip + 1);
    for (int j = i + 1; j <= last; ++j) {
      units.push_back(Pack(words[i], static_cast<std::uint32_t>(words[j])));
    }
  }
  std::sort(units.begin(), units.end());
  return units;
}

std::int64_t ClippedOverlap(std::span<const std::uint64_t> a,
                            std::span<const std::uint64_t> b) {
  std::int64_t overlap = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++overlap;
      ++i;
      ++j;
    }
  }
  return overlap;
}

ScoreTriple ScoreUnits(std::span<const std::uint64_t> candidate,
                       std::span<const std::uint64_t> reference) {
  if (candidate.empty() || reference.empty()) return {};
  const double overlap = static_cast<double>(ClippedOverlap(candidate, reference));
  return MakeScore(overlap / candidate.size(), overlap / reference.size());
}

ScoreTriple RougeSuIds(std::span<const int> candidate,
                       std::span<const int> reference, int skip) {
  return ScoreUnits(SuUnits(candidate, skip), SuUnits(reference, skip));
}

ScoreTriple RougeSu(std::span<const std::string> candidate,
                    std::span<const std::string> reference, int skip) {
  Vocabulary vocab;
  const std::vector<int> c = vocab.Encode(candidate);
  const std::vector<int> r = vocab.Encode(reference);
  return RougeSuIds(c, r, skip);
}

}  // namespace shdpp
