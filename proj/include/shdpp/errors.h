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

#ifndef SHDPP_ERRORS_H_
#define SHDPP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace shdpp {

// Malformed arguments: out-of-range indices, unknown concepts, bad flags.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A kernel or factor that violates the model's structural requirements
// (asymmetric, not PSD, dimension mismatch).
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// The conditioning set of a conditional DPP has probability zero.
class NullEventError : public ModelError {
 public:
  explicit NullEventError(const std::string& what) : ModelError(what) {}
};

class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace shdpp

#endif  // SHDPP_ERRORS_H_
