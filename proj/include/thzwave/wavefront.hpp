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

#ifndef THZWAVE_WAVEFRONT_HPP
#define THZWAVE_WAVEFRONT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thzwave/aperture.hpp"

namespace thzwave
{
    enum class WavefrontKind
    {
        planar,   // beamforming
        focusing, // beamfocusing
        bessel,
        caustic,
    };

    enum class ApertureShape
    {
        square,
        circular, // inscribed disc
    };

    std::string_view to_string(WavefrontKind kind) noexcept;
    std::optional<WavefrontKind> parse_wavefront_kind(std::string_view text) noexcept;

    /// Declarative beam recipe, resolved against a grid by synthesize().
    struct WavefrontSpec
    {
        std::string label;
        WavefrontKind kind = WavefrontKind::planar;

        Direction steer{};                  // added as a planar ramp unless broadside
        std::optional<double> focal_length; // focusing; empty = pick from context (gain curves)
        double spot_size = 0.0;             // bessel
        SpotConvention spot_convention = SpotConvention::fwhm;
        std::vector<double> caustic_coefficients; // caustic, x_c(z) polynomial
        double caustic_z_end = 0.0;
        int oam_mode = 0;

        ApertureShape aperture = ApertureShape::square;
        std::optional<double> taper_waist;
        int quantize_bits = 0; // 0 = continuous phase
    };

    struct SynthesizedWavefront
    {
        ApertureField field;
        std::vector<PhaseMap> phases; // layers as composed (one layer once quantized)
        std::optional<AmplitudeMask> amplitude;
        std::optional<AxiconDesign> axicon;
    };

    SynthesizedWavefront synthesize(const ApertureGrid &grid, const WavefrontSpec &spec);

} // namespace thzwave

#endif
