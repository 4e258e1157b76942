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

#ifndef THZWAVE_SAMPLING_HPP
#define THZWAVE_SAMPLING_HPP

#include <cstddef>

namespace thzwave
{
    /// Regular square sampling of a transverse plane. Sample (row, col) sits at
    /// (origin_x + col * pitch, origin_y + row * pitch).
    struct PlaneSampling
    {
        std::size_t rows = 0;
        std::size_t cols = 0;
        double pitch = 0.0;
        double origin_x = 0.0;
        double origin_y = 0.0;

        double x(std::size_t col) const noexcept { return origin_x + static_cast<double>(col) * pitch; }
        double y(std::size_t row) const noexcept { return origin_y + static_cast<double>(row) * pitch; }
        double x_min() const noexcept { return origin_x; }
        double x_max() const noexcept { return x(cols - 1); }
        double y_min() const noexcept { return origin_y; }
        double y_max() const noexcept { return y(rows - 1); }

        bool operator==(const PlaneSampling &) const = default;
    };

} // namespace thzwave

#endif
