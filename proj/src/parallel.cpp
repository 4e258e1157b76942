// SPDX-License-Identifier: Apache-2.0
//
// thzwave - scalar-diffraction toolkit for terahertz wavefront engineering
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "thzwave/parallel.hpp"

#include <atomic>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace thzwave
{
    namespace
    {
        std::atomic<std::size_t> g_threads{0};
    }

    void set_thread_count(std::size_t threads) { g_threads.store(threads); }

    std::size_t thread_count()
    {
        const std::size_t t = g_threads.load();
        return t == 0 ? static_cast<std::size_t>(tbb::info::default_concurrency()) : t;
    }

    void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body)
    {
        if (count == 0)
            return;
        const std::size_t threads = thread_count();
        if (threads <= 1 || count == 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }
        // Lift the scheduler's worker cap too: it defaults to the core count, so
        // an explicit request above it would otherwise run with fewer workers.
        tbb::global_control cap(tbb::global_control::max_allowed_parallelism, threads);
        tbb::task_arena arena(static_cast<int>(threads));
        arena.execute([&] {
            tbb::parallel_for(tbb::blocked_range<std::size_t>(0, count), [&](const tbb::blocked_range<std::size_t> &r) {
                for (std::size_t i = r.begin(); i != r.end(); ++i)
                    body(i);
            });
        });
    }

} // namespace thzwave
