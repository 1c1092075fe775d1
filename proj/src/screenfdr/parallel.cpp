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

#include "screenfdr/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sfdr {
namespace {

std::atomic<unsigned> g_threads{0};
thread_local bool t_inside_worker = false;

// Marks the calling thread as a pool worker so nested calls run inline.
struct WorkerScope {
  bool saved;
  WorkerScope() : saved(t_inside_worker) { t_inside_worker = true; }
  ~WorkerScope() { t_inside_worker = saved; }
};

unsigned effective_threads() {
  unsigned t = g_threads.load();
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

}  // namespace

void set_thread_count(unsigned threads) { g_threads.store(threads); }

unsigned thread_count() { return effective_threads(); }

void parallel_blocks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
  const std::size_t workers = std::min<std::size_t>(effective_threads(), blocks);
  if (workers <= 1 || t_inside_worker) {
    body(0, n);
    return;
  }
  // Contiguous block ranges per worker.
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t per = (blocks + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b0 = w * per;
    const std::size_t b1 = std::min(blocks, b0 + per);
    if (b0 >= b1) break;
    pool.emplace_back([&, b0, b1] {
      WorkerScope scope;
      try {
        body(b0 * kReduceBlock, std::min(n, b1 * kReduceBlock));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void parallel_tasks(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(effective_threads(), n);
  if (workers <= 1 || t_inside_worker) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      WorkerScope scope;
      try {
        for (std::size_t i = next++; i < n; i = next++) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  parallel_blocks(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) body(i);
  });
}

}  // namespace sfdr
