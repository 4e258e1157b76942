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

#ifndef THZWAVE_APERTURE_HPP
#define THZWAVE_APERTURE_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "thzwave/array2d.hpp"
#include "thzwave/sampling.hpp"

namespace thzwave
{
    /// Square planar array of isotropic elements centred on the z axis.
    ///
    /// Element i along either axis sits at (i - (N-1)/2) * pitch, so odd N puts
    /// an element exactly on the axis. N = floor(side_length / pitch).
    class ApertureGrid
    {
    public:
        ApertureGrid(double side_length, double element_pitch, double frequency);

        double side_length() const noexcept { return side_length_; }
        double element_pitch() const noexcept { return element_pitch_; }
        double frequency() const noexcept { return frequency_; }
        double wavelength() const noexcept { return wavelength_; }
        double wavenumber() const noexcept;
        std::size_t elements_per_side() const noexcept { return elements_per_side_; }

        /// Aperture half-side, the radius used for Bessel zone geometry.
        double half_side() const noexcept { return 0.5 * side_length_; }

        double coordinate(std::size_t index) const noexcept;
        PlaneSampling sampling() const noexcept;

        /// Same physical layout driven at another carrier frequency.
        ApertureGrid at_frequency(double frequency) const;

        bool operator==(const ApertureGrid &) const = default;

    private:
        double side_length_;
        double element_pitch_;
        double frequency_;
        double wavelength_;
        std::size_t elements_per_side_;
    };

    /// Grid with pitch = pitch_fraction * wavelength.
    ApertureGrid make_grid(double side_length, double frequency, double pitch_fraction);

    /// Wraps a phase into [0, 2pi).
    double wrap_phase(double radians) noexcept;

    /// Per-element phase, wrapped to [0, 2pi).
    ///
    /// The unwrapped design phase is kept alongside as `delay()`; true-time-delay
    /// feeds rescale it with frequency, phase shifters reuse `values()`.
    class PhaseMap
    {
    public:
        PhaseMap() = default;

        static PhaseMap from_raw(Array2D<double> radians);

        const Array2D<double> &values() const noexcept { return values_; }
        const Array2D<double> &delay() const noexcept { return delay_; }
        std::size_t rows() const noexcept { return values_.rows(); }
        std::size_t cols() const noexcept { return values_.cols(); }
        double operator()(std::size_t row, std::size_t col) const { return values_(row, col); }

    private:
        PhaseMap(Array2D<double> values, Array2D<double> delay);

        Array2D<double> values_;
        Array2D<double> delay_;
    };

    /// Transmission factors in [0, 1].
    class AmplitudeMask
    {
    public:
        explicit AmplitudeMask(Array2D<double> values);
        static AmplitudeMask uniform(std::size_t rows, std::size_t cols);

        const Array2D<double> &values() const noexcept { return values_; }
        std::size_t rows() const noexcept { return values_.rows(); }
        std::size_t cols() const noexcept { return values_.cols(); }
        double operator()(std::size_t row, std::size_t col) const { return values_(row, col); }

        /// Fraction of samples with non-zero transmission.
        double open_fraction() const noexcept;
        bool fully_blocked() const noexcept { return open_fraction() == 0.0; }

        AmplitudeMask operator*(const AmplitudeMask &other) const;

    private:
        Array2D<double> values_;
    };

    /// Complex element weights on an aperture grid.
    class ApertureField
    {
    public:
        ApertureField(ApertureGrid grid, Array2D<Complex> weights);

        const ApertureGrid &grid() const noexcept { return grid_; }
        const Array2D<Complex> &weights() const noexcept { return weights_; }
        Array2D<Complex> &weights() noexcept { return weights_; }

        /// Sum of |w|^2.
        double power() const noexcept;

    private:
        ApertureGrid grid_;
        Array2D<Complex> weights_;
    };

    struct Direction
    {
        double x = 0.0;
        double y = 0.0;
        double z = 1.0;

        /// theta from +z, phi from +x in the transverse plane.
        static Direction from_angles(double theta, double phi) noexcept;
    };

    enum class SpotConvention
    {
        fwhm,       // spot = intensity FWHM of the J0^2 central lobe
        first_null, // spot = diameter of the first J0 zero
    };

    struct AxiconDesign
    {
        double radial_wavenumber = 0.0; // rad/m
        double cone_angle = 0.0;        // rad
        double z_max = 0.0;             // m, +inf for a plane wave
        double spot_size = 0.0;         // m, as requested
        SpotConvention convention = SpotConvention::fwhm;
        std::size_t ring_count_within_aperture = 0;
    };

    /// First positive root of J0(x)^2 = 1/2, found numerically.
    double j0_half_power_root();

    /// n-th positive zero of J0 (n >= 1).
    double j0_zero(int n);

    enum class ObstacleShape
    {
        disc,
        square,
        half_plane, // blocks x > center_x, unbounded in y
    };

    struct ObstacleSpec
    {
        ObstacleShape shape = ObstacleShape::disc;
        double size = 0.0; // diameter or edge length; 0 leaves the plane open
        double center_x = 0.0;
        double center_y = 0.0;
        double plane_z = 0.0;
    };

    /// Transverse offset x_c(z) of a target caustic over [0, z_end].
    class CausticCurve
    {
    public:
        enum class Shape
        {
            convex,   // x_c'' > 0 throughout
            concave,  // x_c'' < 0 throughout
            straight, // x_c'' == 0
            mixed,    // curvature changes sign: not realisable by tangents
        };

        /// x_c(z) = sum_i coefficients[i] * z^i.
        static CausticCurve polynomial(std::vector<double> coefficients, double z_end);

        /// Natural cubic spline through (z[i], x[i]); z strictly increasing from 0.
        static CausticCurve sampled(std::vector<double> z, std::vector<double> x);

        double position(double z) const { return position_(z); }
        double slope(double z) const { return slope_(z); }
        double curvature(double z) const { return curvature_(z); }
        double z_end() const noexcept { return z_end_; }
        Shape shape() const noexcept { return shape_; }

    private:
        CausticCurve(std::function<double(double)> position, std::function<double(double)> slope,
                     std::function<double(double)> curvature, double z_end, Shape shape);

        std::function<double(double)> position_;
        std::function<double(double)> slope_;
        std::function<double(double)> curvature_;
        double z_end_;
        Shape shape_;
    };

    // ---- profile synthesis -------------------------------------------------

    /// Linear ramp -k (x u_x + y u_y); broadside gives all zeros.
    PhaseMap phase_planar(const ApertureGrid &grid, const Direction &steer);

    /// Exact hyperbolic lens k (sqrt(F^2 + rho^2) - F), co-phased at (0, 0, F).
    PhaseMap phase_quadratic(const ApertureGrid &grid, double focal_length);

    AxiconDesign axicon_design(const ApertureGrid &grid, double spot_size,
                               SpotConvention convention = SpotConvention::fwhm);

    /// Converging cone k_r * rho.
    PhaseMap phase_conical(const ApertureGrid &grid, const AxiconDesign &design);

    /// Helical phase l * atan2(y, x).
    PhaseMap phase_spiral(const ApertureGrid &grid, int mode);

    /// 1-D caustic design, extruded along y. Each aperture abscissa x0 is mapped
    /// to the tangent point z* solving x0 = x_c(z*) - z* x_c'(z*), the local
    /// slope is -k x_c'(z*) / sqrt(1 + x_c'(z*)^2), integrated from x = 0.
    PhaseMap phase_caustic(const ApertureGrid &grid, const CausticCurve &curve);

    /// Rounds every value to the nearest of 2^bits uniform levels on [0, 2pi).
    PhaseMap quantize_phase(const PhaseMap &map, int bits);

    /// Hard-edged occluder: 0 inside the footprint, 1 outside.
    AmplitudeMask make_obstacle_mask(const PlaneSampling &plane, const ObstacleSpec &spec);

    /// Inscribed disc of radius side_length / 2.
    AmplitudeMask circular_mask(const ApertureGrid &grid);

    /// exp(-rho^2 / waist^2) field taper (1/e^2 intensity radius = waist).
    AmplitudeMask gaussian_taper(const ApertureGrid &grid, double waist);

    /// weights = amplitude * exp(j * sum(phases)); summation order does not
    /// affect the result.
    ApertureField compose_aperture(const ApertureGrid &grid, std::span<const PhaseMap> phases,
                                   const std::optional<AmplitudeMask> &amplitude = std::nullopt);

} // namespace thzwave

#endif
