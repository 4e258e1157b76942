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

#include "thzwave/constants.hpp"
#include "thzwave/errors.hpp"
#include "thzwave/oam_link.hpp"

using namespace thzwave;
using Catch::Approx;

namespace
{
    FieldSlice helical(int l, double scale = 1.0)
    {
        FieldSlice s;
        s.z = 0.1;
        const std::size_t n = 81;
        s.sampling = {n, n, 1e-4, -40e-4, -40e-4};
        s.samples = Array2D<Complex>(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
            {
                const double x = s.sampling.x(c), y = s.sampling.y(r);
                const double rho = std::hypot(x, y);
                s.samples(r, c) = scale * rho * std::exp(-rho * rho / 4e-6) * std::polar(1.0, l * std::atan2(y, x));
            }
        return s;
    }
} // namespace

TEST_CASE("required bandwidth is R / (M log2 Q)")
{
    CHECK(required_bandwidth({1e12, 32, 16}) == 7.8125e9);
    CHECK(required_bandwidth({1e12, 32, 1024}) == 3.125e9);
    CHECK(required_bandwidth({1e12, 1, 2}) == 1e12);
    CHECK(required_bandwidth({5e9, 4, 64}) == Approx(5e9 / 24.0));
    CHECK_THROWS_AS(required_bandwidth({1e12, 0, 16}), InvalidArgument);
    CHECK_THROWS_AS(required_bandwidth({1e12, 4, 12}), InvalidArgument);
    CHECK_THROWS_AS(required_bandwidth({-1.0, 4, 16}), InvalidArgument);

    const std::vector<std::int64_t> m{1, 2}, q{4, 16};
    const auto rows = bandwidth_table(1e12, m, q);
    REQUIRE(rows.size() == 4);
    CHECK(rows[3].n_modes == 2);
    CHECK(rows[3].qam_order == 16);
    CHECK(rows[3].bandwidth == 1.25e11);
    // doubling modes halves bandwidth; each extra bit per symbol divides it
    CHECK(rows[0].bandwidth == 2.0 * rows[2].bandwidth);
    CHECK(rows[0].bandwidth == 2.0 * rows[1].bandwidth);
}

TEST_CASE("helical filters separate modes on an analytic slice")
{
    const FieldSlice one = helical(1);
    const double own = std::abs(demultiplex(one, 1, 35.5e-4));
    CHECK(own > 0.0);
    for (int l : {-2, -1, 0, 2, 3})
        CHECK(std::abs(demultiplex(one, l, 35.5e-4)) < 1e-10 * own);
    // linear in the field
    CHECK(std::abs(demultiplex(helical(1, 2.0), 1, 35.5e-4)) == Approx(2.0 * own));
    CHECK_THROWS_AS(demultiplex(one, 1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(demultiplex(one, 1, 0.0), InvalidArgument);
}

TEST_CASE("multiplexed +1 and -1 modes form two petals")
{
    const ApertureGrid g = make_grid(0.02, 3e11, 0.5);
    WavefrontSpec base;
    const ApertureField f = multiplex(g, base, OamModeSet{{1, -1}, {}});
    // e^{j phi} + e^{-j phi} = 2 cos(phi): bright on x, dark on y
    const std::size_t n = g.elements_per_side();
    CHECK(std::abs(f.weights()(n / 2, n - 1)) == Approx(2.0).epsilon(1e-2));
    CHECK(std::abs(f.weights()(n - 1, n / 2)) < 0.1);

    CHECK_THROWS_AS(multiplex(g, base, OamModeSet{{1, 1}, {}}), InvalidArgument);
    CHECK_THROWS_AS(multiplex(g, base, OamModeSet{{}, {}}), InvalidArgument);
    CHECK_THROWS_AS(multiplex(g, base, OamModeSet{{1, 2}, {1.0}}), InvalidArgument);
}

TEST_CASE("co-axial crosstalk matrix of a Bessel carrier")
{
    const ApertureGrid g = make_grid(0.05, 3e11, 0.5);
    WavefrontSpec base;
    base.kind = WavefrontKind::bessel;
    base.spot_size = 0.004;
    const std::vector<int> modes{0, 1, 2};
    const CrosstalkMatrix m = crosstalk_matrix(g, base, modes, 0.05, 0.0, 0.01);
    for (int tx : modes)
        for (int rx : modes)
        {
            if (tx == rx)
                CHECK(m.coupling_db(tx, rx) == 0.0);
            else
                CHECK(m.coupling_db(tx, rx) < -30.0);
        }
    CHECK_THROWS_AS(m.coupling_db(0, 5), InvalidArgument);

    // a steered beam leaks into its neighbours
    const std::vector<double> angles{0.0, deg_to_rad(1.0)};
    const auto sp = steering_spillover(g, base, 1, angles, 0.012, 0.005);
    CHECK(sp[0].neighbour_power_db < -100.0);
    CHECK(sp[1].neighbour_power_db > -30.0);
}
