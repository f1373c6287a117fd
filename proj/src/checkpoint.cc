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

#include "shdpp/checkpoint.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "shdpp/errors.h"

namespace shdpp {
namespace {

using nlohmann::json;

json MatrixToJson(const Matrix& m) {
  json data = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix MatrixFromJson(const json& j) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 ||
      data.size() != static_cast<std::size_t>(rows) * cols) {
    throw InputError("checkpoint matrix has inconsistent shape");
  }
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j2 = 0; j2 < cols; ++j2) {
      m(i, j2) = data[k++].get<double>();
      if (!std::isfinite(m(i, j2))) throw InputError("non-finite factor entry");
    }
  }
  return m;
}

std::uint64_t ParseU64(const std::string& text) {
  std::uint64_t value = 0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw InputError("malformed checkpoint: bad integer '" + text + "'");
  }
  return value;
}

}  // namespace

std::uint64_t LexiconHash(const Lexicon& lexicon) {
  std::uint64_t h = 14695981039346656037ull;
  for (const std::string& name : lexicon.concepts()) {
    for (unsigned char c : name) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= '\n';
    h *= 1099511628211ull;
  }
  return h;
}

std::string SerializeCheckpoint(const Checkpoint& c) {
  json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointFormatVersion;
  j["method"] = c.method;
  j["rank"] = c.rank;
  j["concept_dim"] = c.concept_dim;
  j["segment_size"] = c.segment_size;
  j["mode"] = c.mode;
  j["lexicon_hash"] = std::to_string(c.lexicon_hash);
  j["lambda1"] = c.lambda1;
  j["lambda2"] = c.lambda2;
  j["seed"] = std::to_string(c.seed);
  json factors = json::array();
  for (const Matrix& f : c.factors) factors.push_back(MatrixToJson(f));
  j["factors"] = std::move(factors);
  return j.dump(1) + "\n";
}

Checkpoint ParseCheckpoint(std::string_view text) {
  Checkpoint c;
  try {
    const json j = json::parse(text);
    if (j.at("format") != kCheckpointFormat) throw InputError("not a checkpoint");
    if (j.at("version") != kCheckpointFormatVersion) {
      throw InputError("unsupported checkpoint version " + j.at("version").dump());
    }
    c.method = j.at("method").get<std::string>();
    c.rank = j.at("rank").get<int>();
    c.concept_dim = j.at("concept_dim").get<int>();
    c.segment_size = j.at("segment_size").get<int>();
    c.mode = j.at("mode").get<std::string>();
    c.lexicon_hash = ParseU64(j.at("lexicon_hash").get<std::string>());
    c.lambda1 = j.at("lambda1").get<double>();
    c.lambda2 = j.at("lambda2").get<double>();
    c.seed = ParseU64(j.at("seed").get<std::string>());
    for (const json& f : j.at("factors")) c.factors.push_back(MatrixFromJson(f));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed checkpoint: ") + e.what());
  }
  for (const Matrix& f : c.factors) {
    if (f.rows() != c.rank) throw InputError("factor rank does not match header");
  }
  return c;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << SerializeCheckpoint(checkpoint);
  if (!out) throw IoError("write failed: " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCheckpoint(buffer.str());
}

}  // namespace shdpp
