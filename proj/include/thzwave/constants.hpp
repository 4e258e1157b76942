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

#ifndef THZWAVE_CONSTANTS_HPP
#define THZWAVE_CONSTANTS_HPP

#include <numbers>

namespace thzwave
{
    inline constexpr double kSpeedOfLight = 299792458.0; // m/s
    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

    inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
    inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

} // namespace thzwave

#endif
