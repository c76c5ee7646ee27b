// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace mbtvlc {

namespace {
std::atomic<unsigned> g_threads{1};
thread_local bool t_in_worker = false;
}  // namespace

void set_thread_count(unsigned n) { g_threads = std::max(1u, n); }
unsigned thread_count() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    // Nested loops run inline on the calling worker.
    const std::size_t workers = t_in_worker ? 1 : std::min<std::size_t>(g_threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }

    // One slot per block; the lowest failing block wins so errors do not
    // depend on scheduling.
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t block = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * block);
        const std::size_t end = std::min(n, begin + block);
        pool.emplace_back([&, w, begin, end] {
            t_in_worker = true;
            try {
                for (std::size_t i = begin; i < end; ++i) {
                    body(i);
                }
            } catch (...) {
                failures[w] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (const auto& f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }
}

}  // namespace mbtvlc
