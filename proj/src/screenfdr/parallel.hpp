// Copyright 2026 The screenfdr Authors
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

#pragma once

#include <cstddef>
#include <functional>

namespace sfdr {

// Process-wide cap on worker threads. 0 restores the default (hardware
// concurrency). Results never depend on this value: work is split into
// fixed-size blocks and reductions run in block order.
void set_thread_count(unsigned threads);
unsigned thread_count();

inline constexpr std::size_t kReduceBlock = 256;

// Calls body(begin_block, end_block) for contiguous ranges of [0, n).
// Ranges are multiples of kReduceBlock except possibly the last one. Calls made
// from inside a worker run inline on that worker.
void parallel_blocks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& body);

// One task per index, scheduled dynamically. Tasks must write disjoint outputs.
void parallel_tasks(std::size_t n, const std::function<void(std::size_t)>& body);

// Calls body(i) for every i in [0, n); each index is visited exactly once.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sfdr
