// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace poseproc {

/// 0 means one worker per hardware thread.
inline int resolve_threads(int requested) noexcept
{
    if (requested > 0)
        return requested;
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

/// Runs fn(i) for i in [0, count). Indices are split into contiguous blocks, one per
/// worker; each index is visited exactly once, so writes to per-index slots are race-free.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn)
{
    const int workers = std::min(resolve_threads(threads), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    const int block = (count + workers - 1) / workers;
    for (int w = 1; w < workers; ++w) {
        const int begin = w * block;
        const int end = std::min(count, begin + block);
        if (begin >= end)
            break;
        pool.emplace_back([&fn, begin, end] {
            for (int i = begin; i < end; ++i)
                fn(i);
        });
    }
    for (int i = 0; i < std::min(count, block); ++i)
        fn(i);
}

} // namespace poseproc
