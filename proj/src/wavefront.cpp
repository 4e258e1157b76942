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

#include "thzwave/wavefront.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "thzwave/errors.hpp"

namespace thzwave
{
    namespace
    {
        constexpr std::array<std::pair<WavefrontKind, std::string_view>, 4> kKindNames{{
            {WavefrontKind::planar, "planar"},
            {WavefrontKind::focusing, "focusing"},
            {WavefrontKind::bessel, "bessel"},
            {WavefrontKind::caustic, "caustic"},
        }};

        bool is_broadside(const Direction &d) { return d.x == 0.0 && d.y == 0.0; }
    } // namespace

    std::string_view to_string(WavefrontKind kind) noexcept
    {
        for (const auto &[k, name] : kKindNames)
            if (k == kind)
                return name;
        return "unknown";
    }

    std::optional<WavefrontKind> parse_wavefront_kind(std::string_view text) noexcept
    {
        for (const auto &[k, name] : kKindNames)
            if (name == text)
                return k;
        return std::nullopt;
    }

    SynthesizedWavefront synthesize(const ApertureGrid &grid, const WavefrontSpec &spec)
    {
        std::vector<PhaseMap> phases;
        std::optional<AxiconDesign> axicon;

        switch (spec.kind)
        {
        case WavefrontKind::planar:
            phases.push_back(phase_planar(grid, spec.steer));
            break;
        case WavefrontKind::focusing:
            if (!spec.focal_length)
                throw InvalidArgument("focusing wavefront '" + spec.label + "' has no focal length");
            phases.push_back(phase_quadratic(grid, *spec.focal_length));
            break;
        case WavefrontKind::bessel:
            axicon = axicon_design(grid, spec.spot_size, spec.spot_convention);
            phases.push_back(phase_conical(grid, *axicon));
            break;
        case WavefrontKind::caustic:
            phases.push_back(
                phase_caustic(grid, CausticCurve::polynomial(spec.caustic_coefficients, spec.caustic_z_end)));
            break;
        }
        if (spec.kind != WavefrontKind::planar && !is_broadside(spec.steer))
            phases.push_back(phase_planar(grid, spec.steer));
        if (spec.oam_mode != 0)
            phases.push_back(phase_spiral(grid, spec.oam_mode));

        if (spec.quantize_bits != 0)
        {
            // Phase shifters quantize the total per-element phase, not each layer.
            const ApertureField total = compose_aperture(grid, phases);
            Array2D<double> raw(total.weights().rows(), total.weights().cols());
            for (std::size_t i = 0; i < raw.size(); ++i)
                raw.values()[i] = std::arg(total.weights().values()[i]);
            phases = {quantize_phase(PhaseMap::from_raw(std::move(raw)), spec.quantize_bits)};
        }

        std::optional<AmplitudeMask> amplitude;
        if (spec.aperture == ApertureShape::circular)
            amplitude = circular_mask(grid);
        if (spec.taper_waist)
        {
            AmplitudeMask taper = gaussian_taper(grid, *spec.taper_waist);
            amplitude = amplitude ? *amplitude * taper : taper;
        }

        ApertureField field = compose_aperture(grid, phases, amplitude);
        return SynthesizedWavefront{std::move(field), std::move(phases), std::move(amplitude), axicon};
    }

} // namespace thzwave
