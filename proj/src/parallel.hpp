// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CPAEP_SRC_PARALLEL_HPP
#define CPAEP_SRC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cpaep::detail
{

// Runs fn(i) for i in [0, n) on up to `workers` threads (0: hardware concurrency).
// Each index is written by exactly one task, so results do not depend on scheduling.
// The first exception thrown by any task is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn &&fn)
{
  if (workers == 0)
  {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
  {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++)
      {
        try
        {
          fn(i);
        }
        catch (...)
        {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure)
          {
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto &t : pool)
  {
    t.join();
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
}

}  // namespace cpaep::detail

#endif  // CPAEP_SRC_PARALLEL_HPP
