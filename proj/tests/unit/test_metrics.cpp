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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "thzwave/constants.hpp"
#include "thzwave/errors.hpp"
#include "thzwave/metrics.hpp"
#include "thzwave/wavefront.hpp"

using namespace thzwave;
using Catch::Approx;

namespace
{
    // Analytic slice builder for the shape metrics.
    FieldSlice analytic(std::size_t n, double pitch, const std::function<Complex(double, double)> &f)
    {
        FieldSlice s;
        s.z = 1.0;
        s.sampling = {n, n, pitch, -0.5 * (n - 1) * pitch, -0.5 * (n - 1) * pitch};
        s.samples = Array2D<Complex>(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                s.samples(r, c) = f(s.sampling.x(c), s.sampling.y(r));
        return s;
    }
} // namespace

TEST_CASE("normalized gain by hand for two elements")
{
    // Two elements on x at -p/2 and +p/2, observed off axis.
    const ApertureGrid g(2e-3, 1e-3, 3e11);
    REQUIRE(g.elements_per_side() == 2);
    Array2D<Complex> w(2, 2);
    w(0, 0) = {1.0, 0.0};
    w(0, 1) = {0.0, 0.5};
    const ApertureField f(g, w);
    const Point3 p{0.01, 0.002, 0.1};
    const double k = g.wavenumber();
    Complex num = 0.0;
    double den = 0.0;
    for (std::size_t c = 0; c < 2; ++c)
    {
        const double r = std::hypot(p.x - g.coordinate(c), p.y - g.coordinate(0), p.z);
        num += w(0, c) * std::exp(Complex(0.0, -k * r)) / r;
        den += std::abs(w(0, c)) / r;
    }
    CHECK(normalized_gain(f, p) == Approx(std::norm(num) / (den * den)).epsilon(1e-12));

    const ApertureField zero(g, Array2D<Complex>(2, 2));
    CHECK(normalized_gain(zero, p) == 0.0);
    CHECK_THROWS_AS(normalized_gain(f, Point3{0, 0, 0}), InvalidArgument);
}

TEST_CASE("a co-phased focus reaches unit gain")
{
    const ApertureGrid g = make_grid(0.02, 3e11, 0.5);
    WavefrontSpec s;
    s.kind = WavefrontKind::focusing;
    s.focal_length = 0.1;
    const ApertureField f = synthesize(g, s).field;
    CHECK(normalized_gain(f, Point3{0, 0, 0.1}) == Approx(1.0).margin(1e-12));
    CHECK(normalized_gain(f, Point3{0, 0, 0.05}) < 0.9);
    CHECK(refine_gain_peak(f, 0.05, 0.2) == Approx(0.1).epsilon(1e-3));
}

TEST_CASE("gain curve focuses on the refined Bessel peak")
{
    const ApertureGrid g = make_grid(0.05, 3e11, 0.5);
    WavefrontSpec planar, focus, bessel;
    planar.label = "beamforming";
    focus.label = "beamfocusing";
    focus.kind = WavefrontKind::focusing;
    bessel.label = "bessel";
    bessel.kind = WavefrontKind::bessel;
    bessel.spot_size = 0.004;
    bessel.aperture = ApertureShape::circular;
    std::vector<double> z;
    for (int i = 1; i <= 40; ++i)
        z.push_back(0.01 * i);
    const std::vector<WavefrontSpec> specs{planar, focus, bessel};
    const GainCurve c = gain_curve(g, specs, z);
    REQUIRE(c.bessel_peak);
    CHECK(c.focal_length == c.bessel_peak);
    CHECK(c.distances.size() == 41); // the peak is inserted
    const auto &be = c.curve("bessel");
    const auto &fo = c.curve("beamfocusing");
    std::size_t ip = 0;
    while (c.distances[ip] != *c.bessel_peak)
        ++ip;
    CHECK(fo[ip] == Approx(1.0).margin(1e-9));
    for (double v : be)
        CHECK(v <= be[ip] + 1e-12);
    CHECK_THROWS_AS(c.curve("nope"), InvalidArgument);

    const std::vector<WavefrontSpec> lonely{focus};
    CHECK_THROWS_AS(gain_curve(g, lonely, z), InvalidArgument);
}

TEST_CASE("closed-form aperture figures")
{
    const double lambda = kSpeedOfLight / 1e12;
    CHECK(fraunhofer_distance(0.25, lambda) == Approx(2.0 * 0.0625 / lambda));
    CHECK(aperture_gain_dbi(0.0625, lambda) == Approx(10.0 * std::log10(4.0 * kPi * 0.0625 / (lambda * lambda))));
    CHECK(numeric_aperture(0.125, 0.125) == Approx(std::sin(kPi / 4)));
    CHECK(abbe_spot(0.5, lambda) == Approx(lambda));
    CHECK_THROWS_AS(abbe_spot(1.5, lambda), InvalidArgument);
    CHECK_THROWS_AS(fraunhofer_distance(0.0, lambda), InvalidArgument);
}

TEST_CASE("beam statistics of an analytic Gaussian")
{
    const double w = 2e-3;
    const FieldSlice s = analytic(201, 5e-5, [&](double x, double y) {
        return std::exp(-((x - 4e-4) * (x - 4e-4) + y * y) / (w * w));
    });
    const BeamStats b = beam_profile_stats(s);
    CHECK(b.peak_x == Approx(4e-4).margin(1e-12));
    CHECK(b.peak_y == Approx(0.0).margin(1e-12));
    // intensity exp(-2 r^2 / w^2): FWHM = w sqrt(2 ln 2)
    CHECK(b.fwhm_x == Approx(w * std::sqrt(2.0 * std::log(2.0))).epsilon(1e-3));
    CHECK(b.fwhm_y == Approx(b.fwhm_x).epsilon(1e-3));
    CHECK(b.ring_count == 0);
    CHECK(b.on_axis_intensity == Approx(std::exp(-2.0 * 16e-8 / (w * w))));
    CHECK(width_at_level(s, std::exp(-2.0)) == Approx(2.0 * w).epsilon(1e-3));

    const FieldSlice dark = analytic(11, 1e-3, [](double, double) { return Complex(0.0); });
    CHECK_THROWS_AS(beam_profile_stats(dark), NoBeamError);
    const FieldSlice flat = analytic(11, 1e-3, [](double, double) { return Complex(1.0); });
    CHECK_THROWS_AS(width_at_level(flat, 0.5), NoBeamError);
}

TEST_CASE("ring count and Bessel fit on an ideal J0 slice")
{
    const double kr = 2000.0;
    const FieldSlice s = analytic(401, 2e-5, [&](double x, double y) {
        return Complex(std::cyl_bessel_j(0.0, kr * std::hypot(x, y)));
    });
    // rings above -20 dB on the +x cut up to the slice edge at 4 mm (k_r rho = 8)
    const BeamStats b = beam_profile_stats(s);
    int expect = 0;
    // lobe maxima of J0^2 sit at zeros of J1; scan for sign changes
    for (double x = 0.5; x < kr * 4e-3; x += 1e-3)
        if (std::cyl_bessel_j(1.0, x) * std::cyl_bessel_j(1.0, x + 1e-3) < 0.0 &&
            std::pow(std::cyl_bessel_j(0.0, x), 2) >= 0.01 && (x + 1e-3) / kr < 4e-3 - 2e-5)
            ++expect;
    CHECK(b.ring_count == static_cast<std::size_t>(expect));
    CHECK(bessel_fit_quality(s, kr, 2) == Approx(1.0).margin(1e-12));
}

TEST_CASE("correlation metrics")
{
    const FieldSlice a = analytic(31, 1e-3, [](double x, double y) { return Complex(1.0 + 100 * x, 50 * y); });
    CHECK(self_healing_correlation(a, a) == Approx(1.0));
    CHECK(self_healing_correlation(a, a, 0.005) == Approx(1.0));

    // intensity cosine by hand over a disc
    const FieldSlice b = analytic(31, 1e-3, [](double x, double) { return Complex(1.0 + 200 * x * x); });
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t r = 0; r < 31; ++r)
        for (std::size_t c = 0; c < 31; ++c)
        {
            if (std::hypot(a.sampling.x(c), a.sampling.y(r)) > 0.008)
                continue;
            const double ia = std::norm(a.samples(r, c)), ib = std::norm(b.samples(r, c));
            ab += ia * ib;
            aa += ia * ia;
            bb += ib * ib;
        }
    CHECK(self_healing_correlation(b, a, 0.008) == Approx(ab / std::sqrt(aa * bb)));

    FieldSlice shifted = a;
    shifted.z = 2.0;
    CHECK_THROWS_AS(self_healing_correlation(a, shifted), InvalidArgument);

    const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, z{4, 3, 2, 1};
    CHECK(pearson_correlation(x, y) == Approx(1.0));
    CHECK(pearson_correlation(x, z) == Approx(-1.0));
}

TEST_CASE("independent speckle correlates at one half")
{
    // Monte Carlo oracle: I = |E|^2 with E circular Gaussian is exponential, so
    // E[I1 I2] / E[I^2] = 1/2 for independent fields.
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 1.0);
    auto speckle = [&](double, double) { return Complex(n(rng), n(rng)); };
    const FieldSlice a = analytic(300, 1e-3, speckle);
    const FieldSlice b = analytic(300, 1e-3, speckle);
    CHECK(self_healing_correlation(a, b) == Approx(0.5).margin(0.01));
}
