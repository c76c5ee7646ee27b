// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace mbtvlc {

// Process-wide worker count used by parallel_for. Defaults to 1.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n). Work is split into contiguous blocks, one per
// worker; callers write results into per-index slots and reduce them in index
// order afterwards, so the outcome never depends on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mbtvlc
