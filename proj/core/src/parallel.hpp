/*
 * Copyright 2026 The lipkern authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LIPKERN_PARALLEL_HPP
#define LIPKERN_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace lipkern::detail {

// Thread cap: LIPKERN_THREADS if set (>= 1), else hardware concurrency.
inline int max_threads() {
    static const int cached = [] {
        if (const char* env = std::getenv("LIPKERN_THREADS")) {
            const int n = std::atoi(env);
            if (n >= 1) return n;
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? static_cast<int>(hw) : 1;
    }();
    return cached;
}

// Chunked parallel loop over [begin, end). Each index must write only its
// own slot so results are independent of the schedule.
inline void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end,
                         const std::function<void(std::ptrdiff_t)>& body) {
    const std::ptrdiff_t count = end - begin;
    if (count <= 0) return;
    const int threads = std::min<std::ptrdiff_t>(max_threads(), count);
    if (threads <= 1 || count < 64) {
        for (std::ptrdiff_t i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::ptrdiff_t chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::ptrdiff_t lo = begin + t * chunk;
        const std::ptrdiff_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::ptrdiff_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace lipkern::detail

#endif // LIPKERN_PARALLEL_HPP
