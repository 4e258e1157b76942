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

#ifndef THZWAVE_PROPAGATION_HPP
#define THZWAVE_PROPAGATION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "thzwave/aperture.hpp"
#include "thzwave/array2d.hpp"
#include "thzwave/sampling.hpp"

namespace thzwave
{
    // Time convention: outgoing spherical waves are e^{-jkr}.

    struct Point3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;
    };

    /// Complex field samples on the plane at distance z.
    struct FieldSlice
    {
        double z = 0.0;
        Array2D<Complex> samples;
        PlaneSampling sampling;

        double pitch() const noexcept { return sampling.pitch; }

        /// sum |s|^2 * pitch^2
        double power() const noexcept;
        Array2D<double> intensity() const;

        /// Centred rows x cols window (rounded towards the lower index).
        FieldSlice crop(std::size_t rows, std::size_t cols) const;
    };

    enum class PropagationMethod
    {
        angular_spectrum,
        direct_sum,
    };

    struct PropagationPlan
    {
        PropagationMethod method = PropagationMethod::angular_spectrum;
        int pad_factor = 2;             // window side = next FFT-friendly size >= pad_factor * N
        bool evanescent_cutoff = true;  // zero evanescent bins; otherwise attenuate them
        bool band_limit = true;         // band-limited transfer function

        void validate() const;
    };

    enum class DirectKernel
    {
        huygens,            // w e^{-jkr} / r, isotropic point sources
        rayleigh_sommerfeld, // w p^2 (z/r)(1/r + jk) e^{-jkr} / (2 pi r), same scale as the spectral method
    };

    /// Smallest 2^a 3^b 5^c 7^d >= n.
    std::size_t fft_friendly_size(std::size_t n);

    /// Spectral propagation of the aperture to the plane z. The returned slice
    /// covers the whole padded window with the aperture pitch.
    FieldSlice propagate_asm(const ApertureField &field, double z, const PropagationPlan &plan = {});

    /// Spectral propagation of an existing slice by a further distance dz on
    /// the same window (no extra padding).
    FieldSlice propagate_slice(const FieldSlice &slice, double dz, double wavelength, const PropagationPlan &plan = {});

    /// Forward spectrum of a source window, cached so that any number of planes
    /// can be evaluated with one inverse transform each.
    class AngularSpectrum
    {
    public:
        /// Pads the aperture as propagate_asm does.
        AngularSpectrum(const ApertureField &field, const PropagationPlan &plan = {});
        /// Uses the slice window as is.
        AngularSpectrum(const FieldSlice &source, double wavelength, const PropagationPlan &plan = {});

        /// Field at absolute distance z > source z.
        FieldSlice at(double z) const;

        double source_z() const noexcept { return source_z_; }
        const PlaneSampling &sampling() const noexcept { return sampling_; }

    private:
        void transform(const Array2D<Complex> &window);

        Array2D<Complex> spectrum_;
        PlaneSampling sampling_;
        double source_z_ = 0.0;
        double wavelength_ = 0.0;
        double reference_extent_ = 0.0; // aperture extent for pad hints
        PropagationPlan plan_;
    };

    /// Exact superposition over all elements, evaluated per point.
    std::vector<Complex> propagate_direct(const ApertureField &field, std::span<const Point3> points,
                                          DirectKernel kernel = DirectKernel::huygens);

    /// Direct sum on a regular plane.
    FieldSlice propagate_direct_plane(const ApertureField &field, const PlaneSampling &plane, double z,
                                      DirectKernel kernel = DirectKernel::huygens);

    /// Aperture -> obstacle plane -> mask -> ... -> z_target, all spectral hops
    /// on one padded window.
    FieldSlice propagate_with_obstacles(const ApertureField &field, std::span<const ObstacleSpec> obstacles,
                                        double z_target, const PropagationPlan &plan = {});

    /// On-axis field by direct summation.
    std::vector<Complex> axial_scan(const ApertureField &field, std::span<const double> z_values,
                                    DirectKernel kernel = DirectKernel::huygens);

    enum class DelayModel
    {
        fixed_phase,     // phase shifters: the centre-frequency wrapped phase is reused
        true_time_delay, // delay lines: design phase scales with f / f_c
    };

    struct FrequencySweep
    {
        double center_frequency = 0.0;
        std::vector<double> offsets;
        DelayModel delay_model = DelayModel::fixed_phase;

        void validate() const;
        std::vector<double> frequencies() const;
    };

    /// Phase layers designed at grid.frequency(), driven at another frequency.
    ApertureField retune(const ApertureGrid &grid, std::span<const PhaseMap> phases,
                         const std::optional<AmplitudeMask> &amplitude, double frequency, DelayModel model);

    struct FrequencyPoint
    {
        double frequency = 0.0;
        std::vector<Complex> field; // one value per observation point
        std::vector<double> gain;   // normalized gain per observation point
    };

    struct FrequencyPlane
    {
        double frequency = 0.0;
        FieldSlice slice;
    };

    /// Point observables for every swept frequency.
    std::vector<FrequencyPoint> multi_frequency_scan(const ApertureGrid &grid, std::span<const PhaseMap> phases,
                                                     const std::optional<AmplitudeMask> &amplitude,
                                                     const FrequencySweep &sweep, std::span<const Point3> points);

    /// Plane observable for every swept frequency.
    std::vector<FrequencyPlane> multi_frequency_scan(const ApertureGrid &grid, std::span<const PhaseMap> phases,
                                                     const std::optional<AmplitudeMask> &amplitude,
                                                     const FrequencySweep &sweep, double z,
                                                     const PropagationPlan &plan = {});

} // namespace thzwave

#endif
