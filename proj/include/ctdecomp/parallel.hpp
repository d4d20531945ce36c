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

#ifndef CTDECOMP_PARALLEL_HPP
#define CTDECOMP_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace ctdecomp {

/// Number of worker threads used by the kernels. Defaults to the value of the
/// CTDECOMP_THREADS environment variable, or 1 when unset.
int num_threads();
void set_num_threads(int n);

/// Calls body(begin_i, end_i) on disjoint contiguous chunks covering
/// [begin, end). Every kernel that uses this writes each output element from
/// exactly one chunk, so results do not depend on the thread count.
void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end,
                  const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body,
                  std::ptrdiff_t min_chunk = 16);

}  // namespace ctdecomp

#endif  // CTDECOMP_PARALLEL_HPP
