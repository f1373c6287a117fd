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

#ifndef SHDPP_PARALLEL_H_
#define SHDPP_PARALLEL_H_

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace shdpp {

// Calls fn(i) for i in [0, n) on up to hardware_concurrency threads with a
// static interleaved partition. Callers write into per-index slots and reduce
// in index order afterwards, so results do not depend on the thread count.
// The first exception thrown by any fn(i) is rethrown.
template <typename Fn>
void ParallelFor(int n, Fn&& fn) {
  const int threads = std::min<int>(
      n, std::max(1u, std::thread::hardware_concurrency()));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace shdpp

#endif  // SHDPP_PARALLEL_H_
