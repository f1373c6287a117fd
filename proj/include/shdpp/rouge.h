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

// ROUGE-SU: unigrams plus skip-bigrams whose gap is at most `skip` words,
// scored by clipped multiset overlap. No stemming or stopword removal.

#ifndef SHDPP_ROUGE_H_
#define SHDPP_ROUGE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace shdpp {

inline constexpr int kDefaultSkipDistance = 4;

struct ScoreTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

// f = 2PR / (P + R), or 0 when P + R = 0.
ScoreTriple MakeScore(double precision, double recall);

// Splits on ASCII whitespace.
std::vector<std::string> Tokenize(std::string_view text);

// Interns words to dense ids so unit counting can work on integers.
class Vocabulary {
 public:
  int Intern(std::string_view word);
  std::vector<int> Encode(std::span<const std::string> words);
  int size() const { return static_cast<int>(words_.size()); }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> words_;
};

// Sorted multiset of counting units. A unigram w is encoded as (w, ~0) and a
// skip-bigram (a, b) as (a, b), packed into 64 bits.
std::vector<std::uint64_t> SuUnits(std::span<const int> words, int skip);

// sum over units of min(count in a, count in b); both inputs sorted.
std::int64_t ClippedOverlap(std::span<const std::uint64_t> a,
                            std::span<const std::uint64_t> b);

ScoreTriple ScoreUnits(std::span<const std::uint64_t> candidate,
                       std::span<const std::uint64_t> reference);

// Throws InputError when skip < 0. Either text empty gives all zeros.
ScoreTriple RougeSu(std::span<const std::string> candidate,
                    std::span<const std::string> reference,
                    int skip = kDefaultSkipDistance);
ScoreTriple RougeSuIds(std::span<const int> candidate,
                       std::span<const int> reference,
                       int skip = kDefaultSkipDistance);

}  // namespace shdpp

#endif  // SHDPP_ROUGE_H_
