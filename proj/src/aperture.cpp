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

#include "thzwave/aperture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "thzwave/constants.hpp"
#include "thzwave/errors.hpp"

namespace thzwave
{
    namespace
    {
        // floor(side / pitch) is evaluated with this relative slack so that
        // side = n * pitch built from the same wavelength counts n elements.
        constexpr double kCountSlack = 1e-9;

        template <typename Fn>
        double bracketed_root(Fn &&fn, double lo, double hi)
        {
            boost::math::tools::eps_tolerance<double> tol(52);
            std::uintmax_t max_iter = 200;
            auto [a, b] = boost::math::tools::toms748_solve(fn, lo, hi, tol, max_iter);
            return 0.5 * (a + b);
        }

        template <typename Fn>
        Array2D<double> per_element(const ApertureGrid &grid, Fn &&fn)
        {
            const std::size_t n = grid.elements_per_side();
            Array2D<double> out(n, n);
            for (std::size_t row = 0; row < n; ++row)
            {
                const double y = grid.coordinate(row);
                for (std::size_t col = 0; col < n; ++col)
                    out(row, col) = fn(grid.coordinate(col), y);
            }
            return out;
        }

        double j0(double x) { return std::cyl_bessel_j(0.0, x); }

        CausticCurve::Shape classify(std::span<const double> curvature, double scale)
        {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (double c : curvature)
            {
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
            const double tiny = 1e-12 * scale;
            if (std::abs(lo) <= tiny && std::abs(hi) <= tiny)
                return CausticCurve::Shape::straight;
            if (lo >= -tiny)
                return CausticCurve::Shape::convex;
            if (hi <= tiny)
                return CausticCurve::Shape::concave;
            return CausticCurve::Shape::mixed;
        }
    } // namespace

    // ---- ApertureGrid -------------------------------------------------------

    ApertureGrid::ApertureGrid(double side_length, double element_pitch, double frequency)
        : side_length_(side_length), element_pitch_(element_pitch), frequency_(frequency),
          wavelength_(kSpeedOfLight / frequency), elements_per_side_(0)
    {
        if (!(side_length > 0.0) || !std::isfinite(side_length))
            throw InvalidArgument("aperture side length must be positive");
        if (!(element_pitch > 0.0) || !std::isfinite(element_pitch))
            throw InvalidArgument("element pitch must be positive");
        if (!(frequency > 0.0) || !std::isfinite(frequency))
            throw InvalidArgument("frequency must be positive");
        const double count = std::floor(side_length / element_pitch * (1.0 + kCountSlack));
        if (count < 1.0)
            throw InvalidArgument("aperture side is shorter than one element pitch");
        elements_per_side_ = static_cast<std::size_t>(count);
    }

    double ApertureGrid::wavenumber() const noexcept { return kTwoPi / wavelength_; }

    double ApertureGrid::coordinate(std::size_t index) const noexcept
    {
        return (static_cast<double>(index) - 0.5 * static_cast<double>(elements_per_side_ - 1)) * element_pitch_;
    }

    PlaneSampling ApertureGrid::sampling() const noexcept
    {
        return PlaneSampling{elements_per_side_, elements_per_side_, element_pitch_, coordinate(0), coordinate(0)};
    }

    ApertureGrid ApertureGrid::at_frequency(double frequency) const
    {
        ApertureGrid out(side_length_, element_pitch_, frequency);
        out.elements_per_side_ = elements_per_side_;
        return out;
    }

    ApertureGrid make_grid(double side_length, double frequency, double pitch_fraction)
    {
        if (!(frequency > 0.0))
            throw InvalidArgument("frequency must be positive");
        if (!(pitch_fraction > 0.0) || pitch_fraction > 1.0)
            throw InvalidArgument("pitch fraction must lie in (0, 1]");
        return ApertureGrid(side_length, pitch_fraction * kSpeedOfLight / frequency, frequency);
    }

    // ---- PhaseMap / AmplitudeMask / ApertureField ----------------------------

    double wrap_phase(double radians) noexcept
    {
        double v = std::fmod(radians, kTwoPi);
        if (v < 0.0)
            v += kTwoPi;
        if (v >= kTwoPi)
            v = 0.0;
        return v;
    }

    PhaseMap::PhaseMap(Array2D<double> values, Array2D<double> delay)
        : values_(std::move(values)), delay_(std::move(delay))
    {
    }

    PhaseMap PhaseMap::from_raw(Array2D<double> radians)
    {
        Array2D<double> wrapped(radians.rows(), radians.cols());
        auto src = radians.values();
        auto dst = wrapped.values();
        for (std::size_t i = 0; i < src.size(); ++i)
        {
            if (!std::isfinite(src[i]))
                throw InvalidArgument("phase map contains a non-finite value");
            dst[i] = wrap_phase(src[i]);
        }
        return PhaseMap(std::move(wrapped), std::move(radians));
    }

    AmplitudeMask::AmplitudeMask(Array2D<double> values) : values_(std::move(values))
    {
        for (double v : values_)
            if (!(v >= 0.0 && v <= 1.0))
                throw InvalidArgument("amplitude mask values must lie in [0, 1]");
    }

    AmplitudeMask AmplitudeMask::uniform(std::size_t rows, std::size_t cols)
    {
        return AmplitudeMask(Array2D<double>(rows, cols, 1.0));
    }

    double AmplitudeMask::open_fraction() const noexcept
    {
        if (values_.empty())
            return 0.0;
        const auto open = std::count_if(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
        return static_cast<double>(open) / static_cast<double>(values_.size());
    }

    AmplitudeMask AmplitudeMask::operator*(const AmplitudeMask &other) const
    {
        if (!values_.same_shape(other.values_))
            throw InvalidArgument("amplitude mask shapes differ");
        Array2D<double> out(values_.rows(), values_.cols());
        for (std::size_t i = 0; i < out.size(); ++i)
            out.values()[i] = values_.values()[i] * other.values_.values()[i];
        return AmplitudeMask(std::move(out));
    }

    ApertureField::ApertureField(ApertureGrid grid, Array2D<Complex> weights)
        : grid_(std::move(grid)), weights_(std::move(weights))
    {
        const std::size_t n = grid_.elements_per_side();
        if (weights_.rows() != n || weights_.cols() != n)
            throw InvalidArgument("aperture weights do not match the grid shape");
    }

    double ApertureField::power() const noexcept
    {
        double p = 0.0;
        for (const Complex &w : weights_)
            p += std::norm(w);
        return p;
    }

    Direction Direction::from_angles(double theta, double phi) noexcept
    {
        return Direction{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
    }

    // ---- Bessel helpers -----------------------------------------------------

    double j0_half_power_root()
    {
        // J0^2 falls monotonically from 1 at x = 0 to 0 at the first zero (~2.405).
        return bracketed_root([](double x) { return j0(x) * j0(x) - 0.5; }, 0.1, 2.4);
    }

    double j0_zero(int n)
    {
        if (n < 1)
            throw InvalidArgument("Bessel zero index starts at 1");
        // McMahon's estimate (n - 1/4) pi is within 0.02 of the true zero.
        const double guess = (static_cast<double>(n) - 0.25) * kPi;
        return bracketed_root(j0, guess - 0.4, guess + 0.4);
    }

    // ---- CausticCurve -------------------------------------------------------

    CausticCurve::CausticCurve(std::function<double(double)> position, std::function<double(double)> slope,
                               std::function<double(double)> curvature, double z_end, Shape shape)
        : position_(std::move(position)), slope_(std::move(slope)), curvature_(std::move(curvature)), z_end_(z_end),
          shape_(shape)
    {
    }

    CausticCurve CausticCurve::polynomial(std::vector<double> coefficients, double z_end)
    {
        if (coefficients.empty())
            throw InvalidArgument("caustic polynomial needs at least one coefficient");
        if (!(z_end > 0.0))
            throw InvalidArgument("caustic z_end must be positive");

        auto eval = [](const std::vector<double> &c, double z) {
            double acc = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it)
                acc = acc * z + *it;
            return acc;
        };
        std::vector<double> d1, d2;
        for (std::size_t i = 1; i < coefficients.size(); ++i)
            d1.push_back(static_cast<double>(i) * coefficients[i]);
        for (std::size_t i = 1; i < d1.size(); ++i)
            d2.push_back(static_cast<double>(i) * d1[i]);

        constexpr int kProbe = 513;
        std::vector<double> curv(kProbe);
        double scale = 0.0;
        for (int i = 0; i < kProbe; ++i)
        {
            const double z = z_end * i / (kProbe - 1);
            curv[i] = eval(d2, z);
            scale = std::max({scale, std::abs(eval(d1, z)) / z_end, std::abs(eval(coefficients, z)) / (z_end * z_end)});
        }
        const Shape shape = classify(curv, std::max(scale, 1e-300));

        return CausticCurve([c = coefficients, eval](double z) { return eval(c, z); },
                            [c = d1, eval](double z) { return eval(c, z); },
                            [c = d2, eval](double z) { return eval(c, z); }, z_end, shape);
    }

    CausticCurve CausticCurve::sampled(std::vector<double> z, std::vector<double> x)
    {
        const std::size_t n = z.size();
        if (n < 3 || x.size() != n)
            throw InvalidArgument("sampled caustic needs at least three (z, x) pairs");
        if (z.front() != 0.0)
            throw InvalidArgument("sampled caustic must start at z = 0");
        for (std::size_t i = 1; i < n; ++i)
            if (!(z[i] > z[i - 1]))
                throw InvalidArgument("sampled caustic z must be strictly increasing");

        // Natural cubic spline: solve the tridiagonal system for second derivatives.
        std::vector<double> m(n, 0.0), c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i)
        {
            const double h0 = z[i] - z[i - 1];
            const double h1 = z[i + 1] - z[i];
            const double a = h0, b = 2.0 * (h0 + h1), cc = h1;
            const double rhs = 6.0 * ((x[i + 1] - x[i]) / h1 - (x[i] - x[i - 1]) / h0);
            const double denom = b - a * c[i - 1];
            c[i] = cc / denom;
            d[i] = (rhs - a * d[i - 1]) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i)
            m[i] = d[i] - c[i] * m[i + 1];

        // Convexity is judged on the raw samples' second differences.
        std::vector<double> second(n - 2);
        double scale = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i)
        {
            const double h0 = z[i] - z[i - 1];
            const double h1 = z[i + 1] - z[i];
            second[i - 1] = 2.0 * ((x[i + 1] - x[i]) / h1 - (x[i] - x[i - 1]) / h0) / (h0 + h1);
            scale = std::max(scale, std::abs((x[i + 1] - x[i]) / h1) / z.back());
        }
        const Shape shape = classify(second, std::max(scale, 1e-300));

        struct Spline
        {
            std::vector<double> z, x, m;
            std::size_t segment(double t) const
            {
                auto it = std::upper_bound(z.begin(), z.end(), t);
                std::size_t i = it == z.begin() ? 0 : static_cast<std::size_t>(it - z.begin()) - 1;
                return std::min(i, z.size() - 2);
            }
        };
        auto s = std::make_shared<Spline>(Spline{std::move(z), std::move(x), std::move(m)});
        const double z_end = s->z.back();

        auto position = [s](double t) {
            const std::size_t i = s->segment(t);
            const double h = s->z[i + 1] - s->z[i];
            const double a = (s->z[i + 1] - t) / h, b = (t - s->z[i]) / h;
            return a * s->x[i] + b * s->x[i + 1] +
                   ((a * a * a - a) * s->m[i] + (b * b * b - b) * s->m[i + 1]) * h * h / 6.0;
        };
        auto slope = [s](double t) {
            const std::size_t i = s->segment(t);
            const double h = s->z[i + 1] - s->z[i];
            const double a = (s->z[i + 1] - t) / h, b = (t - s->z[i]) / h;
            return (s->x[i + 1] - s->x[i]) / h - (3.0 * a * a - 1.0) * h * s->m[i] / 6.0 +
                   (3.0 * b * b - 1.0) * h * s->m[i + 1] / 6.0;
        };
        auto curvature = [s](double t) {
            const std::size_t i = s->segment(t);
            const double h = s->z[i + 1] - s->z[i];
            const double a = (s->z[i + 1] - t) / h, b = (t - s->z[i]) / h;
            return a * s->m[i] + b * s->m[i + 1];
        };
        return CausticCurve(position, slope, curvature, z_end, shape);
    }

    // ---- profiles -----------------------------------------------------------

    PhaseMap phase_planar(const ApertureGrid &grid, const Direction &steer)
    {
        const double norm = std::sqrt(steer.x * steer.x + steer.y * steer.y + steer.z * steer.z);
        if (!(std::abs(norm - 1.0) <= 1e-9))
            throw InvalidArgument("steering direction must be a unit vector");
        const double k = grid.wavenumber();
        return PhaseMap::from_raw(per_element(grid, [&](double x, double y) { return -k * (x * steer.x + y * steer.y); }));
    }

    PhaseMap phase_quadratic(const ApertureGrid &grid, double focal_length)
    {
        if (!(focal_length > 0.0))
            throw InvalidArgument("focal length must be positive");
        const double k = grid.wavenumber();
        const double f2 = focal_length * focal_length;
        return PhaseMap::from_raw(per_element(grid, [&](double x, double y) {
            // sqrt(F^2 + rho^2) - F without cancellation at large F.
            const double rho2 = x * x + y * y;
            return k * rho2 / (std::sqrt(f2 + rho2) + focal_length);
        }));
    }

    AxiconDesign axicon_design(const ApertureGrid &grid, double spot_size, SpotConvention convention)
    {
        if (!(spot_size > 0.0))
            throw InvalidArgument("spot size must be positive");
        const double k = grid.wavenumber();
        const double x_spot = convention == SpotConvention::fwhm ? j0_half_power_root() : j0_zero(1);
        const double kr = 2.0 * x_spot / spot_size;
        if (kr >= k)
            throw EvanescentDesignError("spot of " + std::to_string(spot_size) +
                                        " m needs a radial wavenumber at or above k: the cone would be evanescent");
        if (!(spot_size > grid.wavelength()))
            throw InvalidArgument("spot size must exceed one wavelength");

        AxiconDesign d;
        d.radial_wavenumber = kr;
        d.cone_angle = std::asin(kr / k);
        d.z_max = d.cone_angle > 0.0 ? grid.half_side() / std::tan(d.cone_angle)
                                     : std::numeric_limits<double>::infinity();
        d.spot_size = spot_size;
        d.convention = convention;
        // Rings between consecutive J0 zeros that close inside the aperture half-side.
        if (kr > 0.0)
        {
            int n = 1;
            while (j0_zero(n + 1) / kr <= grid.half_side())
                ++n;
            d.ring_count_within_aperture = static_cast<std::size_t>(n - 1);
        }
        return d;
    }

    PhaseMap phase_conical(const ApertureGrid &grid, const AxiconDesign &design)
    {
        if (!(design.radial_wavenumber >= 0.0) || design.radial_wavenumber >= grid.wavenumber())
            throw InvalidArgument("axicon design is not valid at this grid's wavelength");
        const double kr = design.radial_wavenumber;
        return PhaseMap::from_raw(per_element(grid, [&](double x, double y) { return kr * std::hypot(x, y); }));
    }

    PhaseMap phase_spiral(const ApertureGrid &grid, int mode)
    {
        const double l = static_cast<double>(mode);
        return PhaseMap::from_raw(per_element(grid, [&](double x, double y) { return l * std::atan2(y, x); }));
    }

    PhaseMap phase_caustic(const ApertureGrid &grid, const CausticCurve &curve)
    {
        if (curve.shape() == CausticCurve::Shape::mixed)
            throw CausticDesignError("caustic curvature changes sign; tangents are not unique", 0.0);

        const double k = grid.wavenumber();
        const double z_end = curve.z_end();
        auto intercept = [&](double z) { return curve.position(z) - z * curve.slope(z); };

        // Ray slope dx/dz leaving aperture abscissa x0.
        auto ray_slope = [&](double x0) {
            if (curve.shape() == CausticCurve::Shape::straight)
                return curve.slope(0.0);
            const double g0 = intercept(0.0);
            const double g1 = intercept(z_end);
            const double lo = std::min(g0, g1), hi = std::max(g0, g1);
            const double slack = 1e-9 * std::max(1.0, std::abs(hi - lo));
            if (x0 < lo - slack || x0 > hi + slack)
                throw CausticDesignError("no tangent of the caustic reaches aperture x = " + std::to_string(x0) + " m",
                                         x0);
            if (x0 <= lo)
                return curve.slope(g0 <= g1 ? 0.0 : z_end);
            if (x0 >= hi)
                return curve.slope(g0 >= g1 ? 0.0 : z_end);
            const double zs = bracketed_root([&](double z) { return intercept(z) - x0; }, 0.0, z_end);
            return curve.slope(zs);
        };
        auto phase_slope = [&](double x0) {
            const double s = ray_slope(x0);
            return -k * s / std::sqrt(1.0 + s * s);
        };

        // Integrate outward from x = 0 with Simpson's rule between abscissae.
        const std::size_t n = grid.elements_per_side();
        std::vector<double> phase_x(n);
        const double f_origin = phase_slope(0.0);
        auto integrate_side = [&](long start, long stop, long step) {
            double x_prev = 0.0, f_prev = f_origin, acc = 0.0;
            for (long i = start; i != stop; i += step)
            {
                const double x = grid.coordinate(static_cast<std::size_t>(i));
                const double f = phase_slope(x);
                const double fm = phase_slope(0.5 * (x + x_prev));
                acc += (x - x_prev) / 6.0 * (f_prev + 4.0 * fm + f);
                phase_x[static_cast<std::size_t>(i)] = acc;
                x_prev = x;
                f_prev = f;
            }
        };
        // First index with x >= 0.
        long first_pos = 0;
        while (first_pos < static_cast<long>(n) && grid.coordinate(static_cast<std::size_t>(first_pos)) < 0.0)
            ++first_pos;
        integrate_side(first_pos, static_cast<long>(n), 1);
        integrate_side(first_pos - 1, -1, -1);

        Array2D<double> raw(n, n);
        for (std::size_t row = 0; row < n; ++row)
            for (std::size_t col = 0; col < n; ++col)
                raw(row, col) = phase_x[col];
        return PhaseMap::from_raw(std::move(raw));
    }

    PhaseMap quantize_phase(const PhaseMap &map, int bits)
    {
        if (bits < 1 || bits > 16)
            throw InvalidArgument("quantizer resolution must be 1..16 bits");
        const double levels = std::ldexp(1.0, bits);
        const double step = kTwoPi / levels;
        Array2D<double> out(map.rows(), map.cols());
        auto src = map.values().values();
        auto dst = out.values();
        for (std::size_t i = 0; i < src.size(); ++i)
        {
            double level = std::nearbyint(src[i] / step);
            if (level >= levels)
                level = 0.0;
            dst[i] = level * step;
        }
        return PhaseMap::from_raw(std::move(out));
    }

    AmplitudeMask make_obstacle_mask(const PlaneSampling &plane, const ObstacleSpec &spec)
    {
        if (!(spec.size >= 0.0) || !std::isfinite(spec.size))
            throw InvalidArgument("obstacle size must be non-negative");
        Array2D<double> out(plane.rows, plane.cols, 1.0);
        const double half = 0.5 * spec.size;
        for (std::size_t row = 0; row < plane.rows; ++row)
        {
            const double dy = plane.y(row) - spec.center_y;
            for (std::size_t col = 0; col < plane.cols; ++col)
            {
                const double x = plane.x(col);
                const double dx = x - spec.center_x;
                bool blocked = false;
                switch (spec.shape)
                {
                case ObstacleShape::disc:
                    blocked = spec.size > 0.0 && dx * dx + dy * dy < half * half;
                    break;
                case ObstacleShape::square:
                    blocked = spec.size > 0.0 && std::abs(dx) < half && std::abs(dy) < half;
                    break;
                case ObstacleShape::half_plane:
                    blocked = x > spec.center_x;
                    break;
                }
                if (blocked)
                    out(row, col) = 0.0;
            }
        }
        return AmplitudeMask(std::move(out));
    }

    AmplitudeMask circular_mask(const ApertureGrid &grid)
    {
        const double r = grid.half_side();
        return AmplitudeMask(per_element(grid, [&](double x, double y) { return x * x + y * y <= r * r ? 1.0 : 0.0; }));
    }

    AmplitudeMask gaussian_taper(const ApertureGrid &grid, double waist)
    {
        if (!(waist > 0.0))
            throw InvalidArgument("taper waist must be positive");
        const double w2 = waist * waist;
        return AmplitudeMask(per_element(grid, [&](double x, double y) { return std::exp(-(x * x + y * y) / w2); }));
    }

    ApertureField compose_aperture(const ApertureGrid &grid, std::span<const PhaseMap> phases,
                                   const std::optional<AmplitudeMask> &amplitude)
    {
        const std::size_t n = grid.elements_per_side();
        for (const PhaseMap &p : phases)
            if (p.rows() != n || p.cols() != n)
                throw InvalidArgument("phase map shape does not match the aperture grid");
        if (amplitude && (amplitude->rows() != n || amplitude->cols() != n))
            throw InvalidArgument("amplitude mask shape does not match the aperture grid");

        Array2D<Complex> weights(n, n);
        std::vector<double> layer(phases.size());
        for (std::size_t i = 0; i < n * n; ++i)
        {
            for (std::size_t l = 0; l < phases.size(); ++l)
                layer[l] = phases[l].values().values()[i];
            // Sorting makes the floating-point sum independent of layer order.
            std::sort(layer.begin(), layer.end());
            double total = 0.0;
            for (double v : layer)
                total += v;
            const double a = amplitude ? amplitude->values().values()[i] : 1.0;
            weights.values()[i] = std::polar(a, total);
        }
        return ApertureField(grid, std::move(weights));
    }

} // namespace thzwave
