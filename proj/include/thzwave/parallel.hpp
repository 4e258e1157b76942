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

#ifndef THZWAVE_PARALLEL_HPP
#define THZWAVE_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace thzwave
{
    /// Worker count used by every data-parallel loop. 0 restores the default
    /// (hardware concurrency). Results never depend on this value: each index
    /// writes its own output slot and reductions run in index order afterwards.
    void set_thread_count(std::size_t threads);
    std::size_t thread_count();

    /// Calls body(i) for i in [0, count).
    void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

} // namespace thzwave

#endif
