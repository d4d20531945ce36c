// Copyright 2026 The ctdecomp Authors
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

#include "ctdecomp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ctdecomp {
namespace {

int threads_from_env() {
  const char* env = std::getenv("CTDECOMP_THREADS");
  if (env == nullptr) {
    return 1;
  }
  try {
    return std::max(1, std::stoi(env));
  } catch (const std::exception&) {
    return 1;
  }
}

std::atomic<int>& thread_setting() {
  static std::atomic<int> n{threads_from_env()};
  return n;
}

}  // namespace

int num_threads() { return thread_setting().load(); }

void set_num_threads(int n) { thread_setting().store(std::max(1, n)); }

void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end,
                  const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body,
                  std::ptrdiff_t min_chunk) {
  const std::ptrdiff_t n = end - begin;
  if (n <= 0) {
    return;
  }
  const std::ptrdiff_t max_workers = std::max<std::ptrdiff_t>(1, n / std::max<std::ptrdiff_t>(1, min_chunk));
  const std::ptrdiff_t workers = std::min<std::ptrdiff_t>(num_threads(), max_workers);
  if (workers <= 1) {
    body(begin, end);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  const std::ptrdiff_t chunk = (n + workers - 1) / workers;
  for (std::ptrdiff_t w = 1; w < workers; ++w) {
    const std::ptrdiff_t lo = begin + w * chunk;
    const std::ptrdiff_t hi = std::min(end, lo + chunk);
    if (lo < hi) {
      pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
  }
  body(begin, std::min(end, begin + chunk));
}

}  // namespace ctdecomp
