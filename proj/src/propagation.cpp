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

#include "thzwave/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "thzwave/constants.hpp"
#include "thzwave/errors.hpp"
#include "thzwave/metrics.hpp"
#include "thzwave/parallel.hpp"

namespace thzwave
{
    namespace
    {
        // The FFTW planner is not re-entrant; execution of distinct plans is.
        std::mutex &planner_mutex()
        {
            static std::mutex m;
            return m;
        }

        struct FftwFree
        {
            void operator()(fftw_complex *p) const { fftw_free(p); }
        };

        struct PlanDestroy
        {
            void operator()(fftw_plan_s *p) const
            {
                std::lock_guard lock(planner_mutex());
                fftw_destroy_plan(p);
            }
        };

        // In-place square 2-D transform pair on one fftw_malloc'd buffer.
        class Fft2
        {
        public:
            explicit Fft2(std::size_t n) : n_(n)
            {
                buffer_.reset(fftw_alloc_complex(n * n));
                if (!buffer_)
                    throw std::bad_alloc();
                std::lock_guard lock(planner_mutex());
                const int ni = static_cast<int>(n);
                forward_.reset(fftw_plan_dft_2d(ni, ni, buffer_.get(), buffer_.get(), FFTW_FORWARD, FFTW_ESTIMATE));
                backward_.reset(fftw_plan_dft_2d(ni, ni, buffer_.get(), buffer_.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
            }

            Complex *data() { return reinterpret_cast<Complex *>(buffer_.get()); }
            void forward() { fftw_execute(forward_.get()); }
            void backward() { fftw_execute(backward_.get()); }

        private:
            std::size_t n_;
            std::unique_ptr<fftw_complex, FftwFree> buffer_;
            std::unique_ptr<fftw_plan_s, PlanDestroy> forward_;
            std::unique_ptr<fftw_plan_s, PlanDestroy> backward_;
        };

        double required_window(double wavelength, double z)
        {
            // Smallest L with u_limit * L >= 1, i.e. one non-DC bin per axis survives.
            const double l2 = wavelength * wavelength;
            return std::sqrt(0.5 * (l2 + std::sqrt(l2 * l2 + 16.0 * l2 * z * z)));
        }

        std::size_t padded_size(std::size_t n, int pad_factor)
        {
            // Same parity as n keeps the window centred on the aperture axis.
            std::size_t m = fft_friendly_size(static_cast<std::size_t>(pad_factor) * n);
            while ((m - n) % 2 != 0)
                m = fft_friendly_size(m + 1);
            return m;
        }

        void check_points(std::span<const Point3> points)
        {
            for (const Point3 &p : points)
                if (!(p.z > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
                    throw InvalidArgument("observation points need finite coordinates and z > 0");
        }

        Complex direct_point(const ApertureField &field, const Point3 &p, DirectKernel kernel)
        {
            const ApertureGrid &grid = field.grid();
            const std::size_t n = grid.elements_per_side();
            const double k = grid.wavenumber();
            const double pitch2 = grid.element_pitch() * grid.element_pitch();
            const double z2 = p.z * p.z;
            const auto &w = field.weights();

            std::vector<double> dx2(n);
            for (std::size_t col = 0; col < n; ++col)
            {
                const double dx = p.x - grid.coordinate(col);
                dx2[col] = dx * dx;
            }

            Complex total = 0.0;
            for (std::size_t row = 0; row < n; ++row)
            {
                const double dy = p.y - grid.coordinate(row);
                const double base = dy * dy + z2;
                const Complex *wrow = &w(row, 0);
                double re = 0.0, im = 0.0;
                for (std::size_t col = 0; col < n; ++col)
                {
                    const Complex wn = wrow[col];
                    if (wn == Complex(0.0, 0.0))
                        continue;
                    const double r = std::sqrt(base + dx2[col]);
                    const double c = std::cos(k * r);
                    const double s = -std::sin(k * r);
                    // wn * (c + j s) * amplitude
                    double ar, ai;
                    if (kernel == DirectKernel::huygens)
                    {
                        const double a = 1.0 / r;
                        ar = c * a;
                        ai = s * a;
                    }
                    else
                    {
                        // (z/r)(1/r + jk) / (2 pi r) * p^2
                        const double f = p.z / (r * r) / kTwoPi * pitch2;
                        const double gr = f / r, gi = f * k;
                        ar = c * gr - s * gi;
                        ai = c * gi + s * gr;
                    }
                    re += wn.real() * ar - wn.imag() * ai;
                    im += wn.real() * ai + wn.imag() * ar;
                }
                total += Complex(re, im);
            }
            return total;
        }
    } // namespace

    // ---- FieldSlice ---------------------------------------------------------

    double FieldSlice::power() const noexcept
    {
        double p = 0.0;
        for (const Complex &s : samples)
            p += std::norm(s);
        return p * sampling.pitch * sampling.pitch;
    }

    Array2D<double> FieldSlice::intensity() const
    {
        Array2D<double> out(samples.rows(), samples.cols());
        for (std::size_t i = 0; i < out.size(); ++i)
            out.values()[i] = std::norm(samples.values()[i]);
        return out;
    }

    FieldSlice FieldSlice::crop(std::size_t rows, std::size_t cols) const
    {
        if (rows == 0 || cols == 0 || rows > samples.rows() || cols > samples.cols())
            throw InvalidArgument("crop window must fit inside the slice");
        const std::size_t r0 = (samples.rows() - rows) / 2;
        const std::size_t c0 = (samples.cols() - cols) / 2;
        FieldSlice out;
        out.z = z;
        out.samples = Array2D<Complex>(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                out.samples(r, c) = samples(r0 + r, c0 + c);
        out.sampling = PlaneSampling{rows, cols, sampling.pitch, sampling.x(c0), sampling.y(r0)};
        return out;
    }

    void PropagationPlan::validate() const
    {
        if (pad_factor < 1 || pad_factor > 8)
            throw InvalidArgument("pad_factor must lie in [1, 8]");
    }

    std::size_t fft_friendly_size(std::size_t n)
    {
        if (n <= 1)
            return 1;
        for (std::size_t m = n;; ++m)
        {
            std::size_t r = m;
            for (std::size_t f : {2u, 3u, 5u, 7u})
                while (r % f == 0)
                    r /= f;
            if (r == 1)
                return m;
        }
    }

    // ---- spectral propagation ---------------------------------------------------

    AngularSpectrum::AngularSpectrum(const ApertureField &field, const PropagationPlan &plan) : plan_(plan)
    {
        plan.validate();
        if (plan.method != PropagationMethod::angular_spectrum)
            throw InvalidArgument("spectral propagation needs an angular_spectrum plan");
        const ApertureGrid &grid = field.grid();
        const std::size_t n = grid.elements_per_side();
        const std::size_t m = padded_size(n, plan.pad_factor);
        const std::size_t off = (m - n) / 2;
        const double pitch = grid.element_pitch();

        Array2D<Complex> window(m, m);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                window(off + r, off + c) = field.weights()(r, c);
        const double origin = grid.coordinate(0) - static_cast<double>(off) * pitch;
        sampling_ = PlaneSampling{m, m, pitch, origin, origin};
        wavelength_ = grid.wavelength();
        reference_extent_ = static_cast<double>(n) * pitch;
        transform(window);
    }

    AngularSpectrum::AngularSpectrum(const FieldSlice &source, double wavelength, const PropagationPlan &plan)
        : plan_(plan)
    {
        plan.validate();
        if (!(wavelength > 0.0))
            throw InvalidArgument("wavelength must be positive");
        if (source.samples.rows() != source.samples.cols() || source.samples.empty())
            throw InvalidArgument("spectral propagation needs a square, non-empty slice");
        sampling_ = source.sampling;
        source_z_ = source.z;
        wavelength_ = wavelength;
        reference_extent_ = static_cast<double>(source.samples.rows()) * source.pitch() / plan.pad_factor;
        transform(source.samples);
    }

    void AngularSpectrum::transform(const Array2D<Complex> &window)
    {
        const std::size_t m = window.rows();
        Fft2 fft(m);
        std::memcpy(static_cast<void *>(fft.data()), window.data(), m * m * sizeof(Complex));
        fft.forward();
        spectrum_ = Array2D<Complex>(m, m);
        std::memcpy(static_cast<void *>(spectrum_.data()), fft.data(), m * m * sizeof(Complex));
    }

    FieldSlice AngularSpectrum::at(double z) const
    {
        const double dz = z - source_z_;
        if (!(dz > 0.0) || !std::isfinite(dz))
            throw InvalidArgument("propagation distance must be positive");

        const std::size_t m = spectrum_.rows();
        const double pitch = sampling_.pitch;
        const double extent = static_cast<double>(m) * pitch;
        const double du = 1.0 / extent;
        const double k = kTwoPi / wavelength_;

        double u_limit = std::numeric_limits<double>::infinity();
        if (plan_.band_limit)
        {
            u_limit = 1.0 / (wavelength_ * std::sqrt(std::pow(2.0 * du * dz, 2) + 1.0));
            if (u_limit * extent < 1.0)
            {
                const double hint = std::ceil(required_window(wavelength_, dz) / reference_extent_);
                throw SamplingError("band-limited transfer function keeps only the DC bin at distance " +
                                        std::to_string(dz) + " m; pad_factor of at least " +
                                        std::to_string(static_cast<long>(hint)) + " is needed",
                                    hint);
            }
        }

        std::vector<double> freq(m);
        for (std::size_t i = 0; i < m; ++i)
        {
            const long idx = i <= m / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(m);
            freq[i] = static_cast<double>(idx) * du;
        }

        Fft2 fft(m);
        Complex *buf = fft.data();
        const Complex *src = spectrum_.data();
        const double scale = 1.0 / static_cast<double>(m * m);
        const double two_pi2 = kTwoPi * kTwoPi;
        parallel_for(m, [&](std::size_t row) {
            const double fy = freq[row];
            Complex *line = buf + row * m;
            const Complex *in = src + row * m;
            const bool row_out = std::abs(fy) > u_limit;
            for (std::size_t col = 0; col < m; ++col)
            {
                const double fx = freq[col];
                if (row_out || std::abs(fx) > u_limit)
                {
                    line[col] = 0.0;
                    continue;
                }
                const double kz2 = k * k - two_pi2 * (fx * fx + fy * fy);
                Complex h;
                if (kz2 > 0.0)
                {
                    const double phase = -dz * std::sqrt(kz2);
                    h = Complex(std::cos(phase), std::sin(phase));
                }
                else if (plan_.evanescent_cutoff)
                    h = 0.0;
                else
                    h = std::exp(-dz * std::sqrt(-kz2));
                line[col] = in[col] * (h * scale);
            }
        });
        fft.backward();

        FieldSlice out;
        out.z = z;
        out.sampling = sampling_;
        out.samples = Array2D<Complex>(m, m);
        std::memcpy(static_cast<void *>(out.samples.data()), buf, m * m * sizeof(Complex));
        return out;
    }

    FieldSlice propagate_asm(const ApertureField &field, double z, const PropagationPlan &plan)
    {
        if (!(z > 0.0) || !std::isfinite(z))
            throw InvalidArgument("propagation distance must be positive");
        return AngularSpectrum(field, plan).at(z);
    }

    FieldSlice propagate_slice(const FieldSlice &slice, double dz, double wavelength, const PropagationPlan &plan)
    {
        if (!(dz > 0.0) || !std::isfinite(dz))
            throw InvalidArgument("propagation distance must be positive");
        return AngularSpectrum(slice, wavelength, plan).at(slice.z + dz);
    }

    // ---- direct summation -----------------------------------------------------

    std::vector<Complex> propagate_direct(const ApertureField &field, std::span<const Point3> points,
                                          DirectKernel kernel)
    {
        check_points(points);
        std::vector<Complex> out(points.size());
        parallel_for(points.size(), [&](std::size_t i) { out[i] = direct_point(field, points[i], kernel); });
        return out;
    }

    FieldSlice propagate_direct_plane(const ApertureField &field, const PlaneSampling &plane, double z,
                                      DirectKernel kernel)
    {
        std::vector<Point3> pts;
        pts.reserve(plane.rows * plane.cols);
        for (std::size_t r = 0; r < plane.rows; ++r)
            for (std::size_t c = 0; c < plane.cols; ++c)
                pts.push_back({plane.x(c), plane.y(r), z});
        auto values = propagate_direct(field, pts, kernel);
        FieldSlice out;
        out.z = z;
        out.sampling = plane;
        out.samples = Array2D<Complex>(plane.rows, plane.cols);
        std::copy(values.begin(), values.end(), out.samples.begin());
        return out;
    }

    std::vector<Complex> axial_scan(const ApertureField &field, std::span<const double> z_values,
                                    DirectKernel kernel)
    {
        if (z_values.empty())
            throw InvalidArgument("axial scan needs at least one distance");
        std::vector<Point3> pts;
        pts.reserve(z_values.size());
        for (double z : z_values)
            pts.push_back({0.0, 0.0, z});
        return propagate_direct(field, pts, kernel);
    }

    // ---- obstacles ----------------------------------------------------------

    FieldSlice propagate_with_obstacles(const ApertureField &field, std::span<const ObstacleSpec> obstacles,
                                        double z_target, const PropagationPlan &plan)
    {
        if (obstacles.empty())
            return propagate_asm(field, z_target, plan);

        double last = 0.0;
        for (const ObstacleSpec &o : obstacles)
        {
            if (!(o.plane_z > last))
                throw InvalidArgument("obstacle planes must be positive and strictly increasing");
            last = o.plane_z;
        }
        if (!(z_target > last))
            throw InvalidArgument("target plane must lie beyond every obstacle");

        const double wavelength = field.grid().wavelength();
        const AngularSpectrum source(field, plan);
        const PlaneSampling &s = source.sampling();

        // Identity masks (zero-size occluders, edges outside the window) are
        // dropped so they do not split the propagation into extra hops.
        std::vector<std::pair<double, AmplitudeMask>> active;
        for (std::size_t i = 0; i < obstacles.size(); ++i)
        {
            const ObstacleSpec &o = obstacles[i];
            const double half = 0.5 * o.size;
            const bool fits = o.shape == ObstacleShape::half_plane
                                  ? (o.center_x >= s.x_min() && o.center_x <= s.x_max())
                                  : (o.center_x - half >= s.x_min() && o.center_x + half <= s.x_max() &&
                                     o.center_y - half >= s.y_min() && o.center_y + half <= s.y_max());
            if (!fits)
                throw GeometryError("obstacle " + std::to_string(i) + " extends beyond the propagated plane");
            AmplitudeMask mask = make_obstacle_mask(s, o);
            const auto &v = mask.values();
            if (std::any_of(v.begin(), v.end(), [](double t) { return t != 1.0; }))
                active.emplace_back(o.plane_z, std::move(mask));
        }
        if (active.empty())
            return source.at(z_target);

        FieldSlice slice = source.at(active.front().first);
        for (std::size_t i = 0; i < active.size(); ++i)
        {
            if (i > 0)
                slice = AngularSpectrum(slice, wavelength, plan).at(active[i].first);
            const auto &m = active[i].second.values().values();
            for (std::size_t j = 0; j < slice.samples.size(); ++j)
                slice.samples.values()[j] *= m[j];
        }
        return AngularSpectrum(slice, wavelength, plan).at(z_target);
    }

    // ---- frequency sweeps -----------------------------------------------------

    void FrequencySweep::validate() const
    {
        if (!(center_frequency > 0.0))
            throw InvalidArgument("sweep centre frequency must be positive");
        for (double o : offsets)
            if (!(center_frequency + o > 0.0))
                throw InvalidArgument("sweep offset makes a frequency non-positive");
    }

    std::vector<double> FrequencySweep::frequencies() const
    {
        validate();
        std::vector<double> out;
        out.reserve(offsets.size());
        for (double o : offsets)
            out.push_back(center_frequency + o);
        return out;
    }

    ApertureField retune(const ApertureGrid &grid, std::span<const PhaseMap> phases,
                         const std::optional<AmplitudeMask> &amplitude, double frequency, DelayModel model)
    {
        if (!(frequency > 0.0))
            throw InvalidArgument("frequency must be positive");
        const ApertureGrid driven = grid.at_frequency(frequency);
        if (model == DelayModel::fixed_phase || frequency == grid.frequency())
            return compose_aperture(driven, phases, amplitude);

        const double ratio = frequency / grid.frequency();
        std::vector<PhaseMap> scaled;
        scaled.reserve(phases.size());
        for (const PhaseMap &p : phases)
        {
            Array2D<double> d = p.delay();
            for (double &v : d)
                v *= ratio;
            scaled.push_back(PhaseMap::from_raw(std::move(d)));
        }
        return compose_aperture(driven, scaled, amplitude);
    }

    std::vector<FrequencyPoint> multi_frequency_scan(const ApertureGrid &grid, std::span<const PhaseMap> phases,
                                                     const std::optional<AmplitudeMask> &amplitude,
                                                     const FrequencySweep &sweep, std::span<const Point3> points)
    {
        check_points(points);
        std::vector<FrequencyPoint> out;
        for (double f : sweep.frequencies())
        {
            const ApertureField field = retune(grid, phases, amplitude, f, sweep.delay_model);
            FrequencyPoint fp;
            fp.frequency = f;
            fp.field = propagate_direct(field, points);
            for (const Point3 &p : points)
                fp.gain.push_back(normalized_gain(field, p));
            out.push_back(std::move(fp));
        }
        return out;
    }

    std::vector<FrequencyPlane> multi_frequency_scan(const ApertureGrid &grid, std::span<const PhaseMap> phases,
                                                     const std::optional<AmplitudeMask> &amplitude,
                                                     const FrequencySweep &sweep, double z,
                                                     const PropagationPlan &plan)
    {
        std::vector<FrequencyPlane> out;
        for (double f : sweep.frequencies())
            out.push_back({f, propagate_asm(retune(grid, phases, amplitude, f, sweep.delay_model), z, plan)});
        return out;
    }

} // namespace thzwave
