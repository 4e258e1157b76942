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

#include "thzwave/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "thzwave/constants.hpp"
#include "thzwave/errors.hpp"
#include "thzwave/parallel.hpp"

namespace thzwave
{
    namespace
    {
        struct CutWidth
        {
            double lower = 0.0; // coordinate of the crossing below the peak
            double upper = 0.0;
        };

        // Walks both ways from `peak` along a 1-D cut until the value drops below
        // threshold; crossings are linearly interpolated.
        CutWidth crossing(std::span<const double> cut, std::size_t peak, double threshold, double origin,
                          double pitch)
        {
            auto interp = [&](std::size_t inside, std::size_t outside) {
                const double a = cut[inside], b = cut[outside];
                const double t = (a - threshold) / (a - b);
                const double xi = origin + static_cast<double>(inside) * pitch;
                const double xo = origin + static_cast<double>(outside) * pitch;
                return xi + t * (xo - xi);
            };
            CutWidth w;
            std::size_t i = peak;
            while (i > 0 && cut[i - 1] >= threshold)
                --i;
            if (i == 0)
                throw NoBeamError("intensity does not fall to the requested level before the slice edge");
            w.lower = interp(i, i - 1);
            i = peak;
            while (i + 1 < cut.size() && cut[i + 1] >= threshold)
                ++i;
            if (i + 1 == cut.size())
                throw NoBeamError("intensity does not fall to the requested level before the slice edge");
            w.upper = interp(i, i + 1);
            return w;
        }

        struct Peak
        {
            std::size_t row = 0, col = 0;
            double value = 0.0;
        };

        Peak find_peak(const Array2D<double> &intensity)
        {
            Peak p;
            for (std::size_t r = 0; r < intensity.rows(); ++r)
                for (std::size_t c = 0; c < intensity.cols(); ++c)
                    if (intensity(r, c) > p.value)
                        p = {r, c, intensity(r, c)};
            if (!(p.value > 0.0))
                throw NoBeamError("slice carries no intensity");
            return p;
        }

        std::pair<double, double> cut_widths(const FieldSlice &slice, const Array2D<double> &intensity,
                                             const Peak &peak, double level)
        {
            const PlaneSampling &s = slice.sampling;
            std::vector<double> row(intensity.cols()), col(intensity.rows());
            for (std::size_t c = 0; c < row.size(); ++c)
                row[c] = intensity(peak.row, c);
            for (std::size_t r = 0; r < col.size(); ++r)
                col[r] = intensity(r, peak.col);
            const double threshold = level * peak.value;
            const CutWidth wx = crossing(row, peak.col, threshold, s.origin_x, s.pitch);
            const CutWidth wy = crossing(col, peak.row, threshold, s.origin_y, s.pitch);
            return {wx.upper - wx.lower, wy.upper - wy.lower};
        }

        void check_same_plane(const FieldSlice &a, const FieldSlice &b)
        {
            if (!a.samples.same_shape(b.samples) || a.sampling.pitch != b.sampling.pitch)
                throw InvalidArgument("slices have different shapes or sampling");
            if (std::abs(a.z - b.z) > 1e-12 * std::max({1.0, std::abs(a.z), std::abs(b.z)}))
                throw InvalidArgument("slices lie on different planes");
        }

        double intensity_cosine(const FieldSlice &a, const FieldSlice &b, double radius, double cx, double cy)
        {
            check_same_plane(a, b);
            const PlaneSampling &s = a.sampling;
            const double r2 = radius * radius;
            double ab = 0.0, aa = 0.0, bb = 0.0;
            for (std::size_t r = 0; r < s.rows; ++r)
            {
                const double dy = s.y(r) - cy;
                for (std::size_t c = 0; c < s.cols; ++c)
                {
                    const double dx = s.x(c) - cx;
                    if (dx * dx + dy * dy > r2)
                        continue;
                    const double ia = std::norm(a.samples(r, c));
                    const double ib = std::norm(b.samples(r, c));
                    ab += ia * ib;
                    aa += ia * ia;
                    bb += ib * ib;
                }
            }
            if (aa == 0.0 || bb == 0.0)
                return 0.0;
            return ab / (std::sqrt(aa) * std::sqrt(bb));
        }

        double j0_squared(double x)
        {
            const double v = std::cyl_bessel_j(0.0, x);
            return v * v;
        }
    } // namespace

    // ---- normalized gain ------------------------------------------------------

    double normalized_gain(const ApertureField &field, const Point3 &p)
    {
        if (!(p.z > 0.0))
            throw InvalidArgument("gain evaluation point needs z > 0");
        const ApertureGrid &grid = field.grid();
        const std::size_t n = grid.elements_per_side();
        const double k = grid.wavenumber();
        const double z2 = p.z * p.z;
        const auto &w = field.weights();

        std::vector<double> dx2(n);
        for (std::size_t col = 0; col < n; ++col)
        {
            const double dx = p.x - grid.coordinate(col);
            dx2[col] = dx * dx;
        }
        Complex coherent = 0.0;
        double incoherent = 0.0;
        for (std::size_t row = 0; row < n; ++row)
        {
            const double dy = p.y - grid.coordinate(row);
            const double base = dy * dy + z2;
            double re = 0.0, im = 0.0, mag = 0.0;
            for (std::size_t col = 0; col < n; ++col)
            {
                const Complex wn = w(row, col);
                if (wn == Complex(0.0, 0.0))
                    continue;
                const double r = std::sqrt(base + dx2[col]);
                const double inv = 1.0 / r;
                const double c = std::cos(k * r) * inv;
                const double s = -std::sin(k * r) * inv;
                re += wn.real() * c - wn.imag() * s;
                im += wn.real() * s + wn.imag() * c;
                mag += std::abs(wn) * inv;
            }
            coherent += Complex(re, im);
            incoherent += mag;
        }
        if (incoherent == 0.0)
            return 0.0;
        return std::norm(coherent) / (incoherent * incoherent);
    }

    std::vector<double> normalized_gain(const ApertureField &field, std::span<const Point3> points)
    {
        for (const Point3 &p : points)
            if (!(p.z > 0.0))
                throw InvalidArgument("gain evaluation point needs z > 0");
        std::vector<double> out(points.size());
        parallel_for(points.size(), [&](std::size_t i) { out[i] = normalized_gain(field, points[i]); });
        return out;
    }

    const std::vector<double> &GainCurve::curve(const std::string &label) const
    {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label)
                return gain[i];
        throw InvalidArgument("no gain curve labelled '" + label + "'");
    }

    double refine_gain_peak(const ApertureField &field, double lo, double hi, double tolerance)
    {
        if (!(lo > 0.0) || !(hi > lo))
            throw InvalidArgument("peak search needs 0 < lo < hi");
        // Bits of precision relative to the bracket, enough for the requested tolerance.
        const int bits = std::clamp(static_cast<int>(std::ceil(std::log2(hi / tolerance))), 8, 40);
        std::uintmax_t max_iter = 200;
        const auto [z, neg] = boost::math::tools::brent_find_minima(
            [&](double z) { return -normalized_gain(field, Point3{0.0, 0.0, z}); }, lo, hi, bits, max_iter);
        (void)neg;
        return z;
    }

    GainCurve gain_curve(const ApertureGrid &grid, std::span<const WavefrontSpec> wavefronts,
                         std::span<const double> distances)
    {
        if (wavefronts.empty())
            throw InvalidArgument("gain curve needs at least one wavefront");
        if (distances.empty())
            throw InvalidArgument("gain curve needs at least one distance");
        for (std::size_t i = 0; i < distances.size(); ++i)
            if (!(distances[i] > 0.0) || (i > 0 && !(distances[i] > distances[i - 1])))
                throw InvalidArgument("distances must be positive and strictly increasing");

        GainCurve out;
        out.distances.assign(distances.begin(), distances.end());
        auto axis_points = [](std::span<const double> zs) {
            std::vector<Point3> pts;
            for (double z : zs)
                pts.push_back({0.0, 0.0, z});
            return pts;
        };

        const bool needs_focus = std::any_of(wavefronts.begin(), wavefronts.end(), [](const WavefrontSpec &w) {
            return w.kind == WavefrontKind::focusing && !w.focal_length;
        });
        const auto bessel_it = std::find_if(wavefronts.begin(), wavefronts.end(),
                                            [](const WavefrontSpec &w) { return w.kind == WavefrontKind::bessel; });

        std::optional<ApertureField> bessel_field;
        std::vector<double> bessel_gain;
        if (bessel_it != wavefronts.end())
        {
            bessel_field = synthesize(grid, *bessel_it).field;
            const auto pts = axis_points(distances);
            bessel_gain = normalized_gain(*bessel_field, pts);
            const std::size_t i = static_cast<std::size_t>(
                std::max_element(bessel_gain.begin(), bessel_gain.end()) - bessel_gain.begin());
            const double lo = i > 0 ? distances[i - 1] : 0.5 * distances[0];
            const double hi = i + 1 < distances.size() ? distances[i + 1] : distances[i] * 1.5;
            const double peak = refine_gain_peak(*bessel_field, lo, hi);
            out.bessel_peak = peak;

            if (needs_focus)
            {
                out.focal_length = peak;
                auto pos = std::lower_bound(out.distances.begin(), out.distances.end(), peak);
                if (pos == out.distances.end() || *pos != peak)
                {
                    const std::size_t at = static_cast<std::size_t>(pos - out.distances.begin());
                    out.distances.insert(pos, peak);
                    bessel_gain.insert(bessel_gain.begin() + static_cast<std::ptrdiff_t>(at),
                                       normalized_gain(*bessel_field, Point3{0.0, 0.0, peak}));
                }
            }
        }
        else if (needs_focus)
            throw InvalidArgument("focusing wavefront without focal length needs a Bessel wavefront to focus on");

        const auto pts = axis_points(out.distances);
        for (auto it = wavefronts.begin(); it != wavefronts.end(); ++it)
        {
            const WavefrontSpec &spec = *it;
            out.labels.push_back(spec.label.empty() ? std::string(to_string(spec.kind)) : spec.label);
            out.kinds.push_back(spec.kind);
            if (it == bessel_it)
            {
                out.gain.push_back(bessel_gain);
                continue;
            }
            WavefrontSpec resolved = spec;
            if (resolved.kind == WavefrontKind::focusing && !resolved.focal_length)
                resolved.focal_length = out.focal_length;
            out.gain.push_back(normalized_gain(synthesize(grid, resolved).field, pts));
        }
        return out;
    }

    // ---- closed forms ---------------------------------------------------------

    double fraunhofer_distance(double aperture_extent, double wavelength)
    {
        if (!(aperture_extent > 0.0) || !(wavelength > 0.0))
            throw InvalidArgument("aperture extent and wavelength must be positive");
        return 2.0 * aperture_extent * aperture_extent / wavelength;
    }

    double aperture_gain_dbi(double area, double wavelength)
    {
        if (!(area > 0.0) || !(wavelength > 0.0))
            throw InvalidArgument("area and wavelength must be positive");
        return 10.0 * std::log10(4.0 * kPi * area / (wavelength * wavelength));
    }

    double numeric_aperture(double aperture_radius, double focal_length)
    {
        if (!(aperture_radius > 0.0) || !(focal_length > 0.0))
            throw InvalidArgument("aperture radius and focal length must be positive");
        return std::sin(std::atan(aperture_radius / focal_length));
    }

    double abbe_spot(double na, double wavelength)
    {
        if (!(na > 0.0) || na > 1.0)
            throw InvalidArgument("numeric aperture must lie in (0, 1]");
        if (!(wavelength > 0.0))
            throw InvalidArgument("wavelength must be positive");
        return wavelength / (2.0 * na);
    }

    // ---- beam shape -----------------------------------------------------------

    BeamStats beam_profile_stats(const FieldSlice &slice)
    {
        if (slice.samples.empty())
            throw InvalidArgument("slice is empty");
        const Array2D<double> intensity = slice.intensity();
        const Peak peak = find_peak(intensity);
        const PlaneSampling &s = slice.sampling;

        BeamStats st;
        st.peak_x = s.x(peak.col);
        st.peak_y = s.y(peak.row);
        st.peak_intensity = peak.value;
        std::tie(st.fwhm_x, st.fwhm_y) = cut_widths(slice, intensity, peak, 0.5);
        st.fwhm = 0.5 * (st.fwhm_x + st.fwhm_y);

        const double floor = 0.01 * peak.value; // -20 dB
        for (std::size_t c = peak.col + 1; c + 1 < s.cols; ++c)
        {
            const double v = intensity(peak.row, c);
            if (v >= floor && v > intensity(peak.row, c - 1) && v >= intensity(peak.row, c + 1))
                ++st.ring_count;
        }

        const double fc = -s.origin_x / s.pitch;
        const double fr = -s.origin_y / s.pitch;
        if (fc >= -0.5 && fr >= -0.5 && fc <= static_cast<double>(s.cols) - 0.5 &&
            fr <= static_cast<double>(s.rows) - 0.5)
        {
            const auto c = std::min(static_cast<std::size_t>(std::lround(std::max(fc, 0.0))), s.cols - 1);
            const auto r = std::min(static_cast<std::size_t>(std::lround(std::max(fr, 0.0))), s.rows - 1);
            st.on_axis_intensity = intensity(r, c);
        }
        return st;
    }

    double width_at_level(const FieldSlice &slice, double level)
    {
        if (!(level > 0.0 && level < 1.0))
            throw InvalidArgument("level must lie in (0, 1)");
        if (slice.samples.empty())
            throw InvalidArgument("slice is empty");
        const Array2D<double> intensity = slice.intensity();
        const auto [wx, wy] = cut_widths(slice, intensity, find_peak(intensity), level);
        return 0.5 * (wx + wy);
    }

    double self_healing_correlation(const FieldSlice &blocked, const FieldSlice &reference)
    {
        return intensity_cosine(blocked, reference, std::numeric_limits<double>::infinity(), 0.0, 0.0);
    }

    double self_healing_correlation(const FieldSlice &blocked, const FieldSlice &reference, double rx_radius,
                                    double centre_x, double centre_y)
    {
        if (!(rx_radius > 0.0))
            throw InvalidArgument("receiver radius must be positive");
        return intensity_cosine(blocked, reference, rx_radius, centre_x, centre_y);
    }

    double pearson_correlation(std::span<const double> a, std::span<const double> b)
    {
        if (a.size() != b.size() || a.size() < 2)
            throw InvalidArgument("correlation needs two equally long series of at least two samples");
        const double n = static_cast<double>(a.size());
        double ma = 0.0, mb = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            ma += a[i];
            mb += b[i];
        }
        ma /= n;
        mb /= n;
        double sab = 0.0, saa = 0.0, sbb = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            const double da = a[i] - ma, db = b[i] - mb;
            sab += da * db;
            saa += da * da;
            sbb += db * db;
        }
        if (saa == 0.0 || sbb == 0.0)
            throw InvalidArgument("correlation of a constant series is undefined");
        return sab / std::sqrt(saa * sbb);
    }

    double bessel_fit_quality(const FieldSlice &slice, double radial_wavenumber, int lobes)
    {
        if (!(radial_wavenumber > 0.0))
            throw InvalidArgument("radial wavenumber must be positive");
        const double rho_max = j0_zero(lobes) / radial_wavenumber;
        const PlaneSampling &s = slice.sampling;
        std::vector<double> measured, model;
        for (std::size_t r = 0; r < s.rows; ++r)
            for (std::size_t c = 0; c < s.cols; ++c)
            {
                const double rho = std::hypot(s.x(c), s.y(r));
                if (rho > rho_max)
                    continue;
                measured.push_back(std::norm(slice.samples(r, c)));
                model.push_back(j0_squared(radial_wavenumber * rho));
            }
        return pearson_correlation(measured, model);
    }

    double bessel_fit_quality(std::span<const double> rho, std::span<const double> intensity,
                              double radial_wavenumber, int lobes)
    {
        if (rho.size() != intensity.size())
            throw InvalidArgument("radial profile and intensity lengths differ");
        if (!(radial_wavenumber > 0.0))
            throw InvalidArgument("radial wavenumber must be positive");
        const double rho_max = j0_zero(lobes) / radial_wavenumber;
        std::vector<double> measured, model;
        for (std::size_t i = 0; i < rho.size(); ++i)
        {
            if (rho[i] > rho_max)
                continue;
            measured.push_back(intensity[i]);
            model.push_back(j0_squared(radial_wavenumber * rho[i]));
        }
        return pearson_correlation(measured, model);
    }

} // namespace thzwave
