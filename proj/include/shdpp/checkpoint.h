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

// Text checkpoints for trained kernel factors. Doubles are written in their
// shortest round-trip decimal form, so save/load is bit-exact.

#ifndef SHDPP_CHECKPOINT_H_
#define SHDPP_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "shdpp/features.h"
#include "shdpp/training.h"

namespace shdpp {

inline constexpr char kCheckpointFormat[] = "shdpp-checkpoint";
inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
  std::string method;  // shdpp, seqdpp or dpp
  int rank = 0;
  int concept_dim = 0;
  int segment_size = 0;
  std::string mode;
  std::uint64_t lexicon_hash = 0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::uint64_t seed = 0;
  Factors factors;
};

// FNV-1a over the concept names, newline separated.
std::uint64_t LexiconHash(const Lexicon& lexicon);

std::string SerializeCheckpoint(const Checkpoint& checkpoint);
// Throws InputError on a malformed document or mismatched shapes.
Checkpoint ParseCheckpoint(std::string_view text);

void SaveCheckpoint(const std::string& path, const Checkpoint& checkpoint);
// Throws IoError when unreadable.
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace shdpp

#endif  // SHDPP_CHECKPOINT_H_
