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

#ifndef THZWAVE_METRICS_HPP
#define THZWAVE_METRICS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thzwave/aperture.hpp"
#include "thzwave/propagation.hpp"
#include "thzwave/wavefront.hpp"

namespace thzwave
{
    /// Coherence factor |sum w e^{-jkr}/r|^2 / (sum |w|/r)^2, in [0, 1].
    double normalized_gain(const ApertureField &field, const Point3 &point);
    std::vector<double> normalized_gain(const ApertureField &field, std::span<const Point3> points);

    struct GainCurve
    {
        std::vector<double> distances;
        std::vector<std::string> labels;
        std::vector<std::vector<double>> gain; // gain[wavefront][distance]
        std::vector<WavefrontKind> kinds;

        std::optional<double> bessel_peak;  // refined distance of the Bessel maximum
        std::optional<double> focal_length; // focal length given to auto-focused wavefronts

        const std::vector<double> &curve(const std::string &label) const;
    };

    /// On-axis normalized gain for every wavefront. Focusing wavefronts without a
    /// focal length are focused at the refined peak of the first Bessel curve,
    /// and that distance is merged into the sampled distances.
    GainCurve gain_curve(const ApertureGrid &grid, std::span<const WavefrontSpec> wavefronts,
                         std::span<const double> distances);

    /// Maximiser of on-axis gain inside [lo, hi] by golden-section search.
    double refine_gain_peak(const ApertureField &field, double lo, double hi, double tolerance = 1e-4);

    /// 2 D^2 / lambda
    double fraunhofer_distance(double aperture_extent, double wavelength);

    /// 10 log10(4 pi A / lambda^2)
    double aperture_gain_dbi(double area, double wavelength);

    /// sin(atan(R / F))
    double numeric_aperture(double aperture_radius, double focal_length);

    /// lambda / (2 NA)
    double abbe_spot(double numeric_aperture, double wavelength);

    struct BeamStats
    {
        double peak_x = 0.0;
        double peak_y = 0.0;
        double peak_intensity = 0.0;
        double fwhm = 0.0; // mean of the x and y cut widths
        double fwhm_x = 0.0;
        double fwhm_y = 0.0;
        std::size_t ring_count = 0;
        double on_axis_intensity = 0.0;
    };

    /// Peak, half-maximum widths along the cuts through the peak, and the number
    /// of secondary maxima above -20 dB on the +x radial cut.
    BeamStats beam_profile_stats(const FieldSlice &slice);

    /// Full width where the intensity cuts through the peak fall to level * peak,
    /// averaged over x and y. level = exp(-2) gives twice the Gaussian 1/e^2 radius.
    double width_at_level(const FieldSlice &slice, double level);

    /// <I_b, I_r> / (|I_b| |I_r|) over the whole slice.
    double self_healing_correlation(const FieldSlice &blocked, const FieldSlice &reference);

    /// Same, restricted to samples within rx_radius of (centre_x, centre_y).
    double self_healing_correlation(const FieldSlice &blocked, const FieldSlice &reference, double rx_radius,
                                    double centre_x = 0.0, double centre_y = 0.0);

    double pearson_correlation(std::span<const double> a, std::span<const double> b);

    /// Pearson correlation of the slice intensity with J0^2(k_r rho) over all
    /// samples within the lobes-th zero of J0 around the axis.
    double bessel_fit_quality(const FieldSlice &slice, double radial_wavenumber, int lobes);

    /// Same fit on a sampled radial profile; samples beyond the lobes-th zero are ignored.
    double bessel_fit_quality(std::span<const double> rho, std::span<const double> intensity,
                              double radial_wavenumber, int lobes);

} // namespace thzwave

#endif
