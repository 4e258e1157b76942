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

#include "thzwave/oam_link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "thzwave/errors.hpp"

namespace thzwave
{
    namespace
    {
        double power_ratio_db(double num, double den)
        {
            if (num == 0.0)
                return -std::numeric_limits<double>::infinity();
            return 10.0 * std::log10(num / den);
        }

        FieldSlice single_mode_slice(const ApertureGrid &grid, const WavefrontSpec &base, int mode, double steer,
                                     double z, const PropagationPlan &plan)
        {
            WavefrontSpec spec = base;
            spec.oam_mode = base.oam_mode + mode;
            if (steer != 0.0)
                spec.steer = Direction::from_angles(steer, 0.0);
            return propagate_asm(synthesize(grid, spec).field, z, plan);
        }
    } // namespace

    void OamModeSet::validate() const
    {
        if (modes.empty())
            throw InvalidArgument("mode set is empty");
        if (!amplitudes.empty() && amplitudes.size() != modes.size())
            throw InvalidArgument("mode set has " + std::to_string(modes.size()) + " modes but " +
                                  std::to_string(amplitudes.size()) + " amplitudes");
        if (std::set<int>(modes.begin(), modes.end()).size() != modes.size())
            throw InvalidArgument("mode indices must be distinct");
    }

    ApertureField multiplex(const ApertureGrid &grid, const WavefrontSpec &base, const OamModeSet &set)
    {
        set.validate();
        ApertureField field = synthesize(grid, base).field;
        const std::size_t n = grid.elements_per_side();
        for (std::size_t row = 0; row < n; ++row)
        {
            const double y = grid.coordinate(row);
            for (std::size_t col = 0; col < n; ++col)
            {
                const double phi = std::atan2(y, grid.coordinate(col));
                Complex helix = 0.0;
                for (std::size_t i = 0; i < set.modes.size(); ++i)
                    helix += set.amplitude(i) * std::polar(1.0, static_cast<double>(set.modes[i]) * phi);
                field.weights()(row, col) *= helix;
            }
        }
        return field;
    }

    Complex demultiplex(const FieldSlice &slice, int mode, double rx_radius, double cx, double cy)
    {
        const PlaneSampling &s = slice.sampling;
        if (!(rx_radius > 0.0))
            throw InvalidArgument("receiver radius must be positive");
        const double slack = 1e-9 * s.pitch;
        if (cx - rx_radius < s.x_min() - slack || cx + rx_radius > s.x_max() + slack ||
            cy - rx_radius < s.y_min() - slack || cy + rx_radius > s.y_max() + slack)
            throw InvalidArgument("receiver disc extends beyond the slice");

        const double r2 = rx_radius * rx_radius;
        const double l = static_cast<double>(mode);
        Complex total = 0.0;
        for (std::size_t r = 0; r < s.rows; ++r)
        {
            const double dy = s.y(r) - cy;
            Complex line = 0.0;
            for (std::size_t c = 0; c < s.cols; ++c)
            {
                const double dx = s.x(c) - cx;
                if (dx * dx + dy * dy > r2)
                    continue;
                line += slice.samples(r, c) * std::polar(1.0, -l * std::atan2(dy, dx));
            }
            total += line;
        }
        return total * (s.pitch * s.pitch);
    }

    double CrosstalkMatrix::coupling_db(int tx_mode, int rx_mode) const
    {
        const auto tx = std::find(modes.begin(), modes.end(), tx_mode);
        const auto rx = std::find(modes.begin(), modes.end(), rx_mode);
        if (tx == modes.end() || rx == modes.end())
            throw InvalidArgument("mode not present in the crosstalk matrix");
        return power_coupling_db(static_cast<std::size_t>(rx - modes.begin()),
                                 static_cast<std::size_t>(tx - modes.begin()));
    }

    CrosstalkMatrix crosstalk_matrix(const ApertureGrid &grid, const WavefrontSpec &base, std::span<const int> modes,
                                     double z, double steer_angle, double rx_radius, const PropagationPlan &plan)
    {
        OamModeSet{std::vector<int>(modes.begin(), modes.end()), {}}.validate();
        if (!(z > 0.0))
            throw InvalidArgument("receiver distance must be positive");

        const std::size_t m = modes.size();
        CrosstalkMatrix out;
        out.modes.assign(modes.begin(), modes.end());
        out.power_coupling_db = Array2D<double>(m, m);
        for (std::size_t tx = 0; tx < m; ++tx)
        {
            const FieldSlice slice = single_mode_slice(grid, base, modes[tx], steer_angle, z, plan);
            std::vector<double> p(m);
            for (std::size_t rx = 0; rx < m; ++rx)
                p[rx] = std::norm(demultiplex(slice, modes[rx], rx_radius));
            if (p[tx] == 0.0)
                throw NumericError("mode " + std::to_string(modes[tx]) + " carries no power into its own filter");
            for (std::size_t rx = 0; rx < m; ++rx)
                out.power_coupling_db(rx, tx) = rx == tx ? 0.0 : power_ratio_db(p[rx], p[tx]);
        }
        return out;
    }

    std::vector<SpilloverPoint> steering_spillover(const ApertureGrid &grid, const WavefrontSpec &base, int mode,
                                                   std::span<const double> steer_angles, double z, double rx_radius,
                                                   const PropagationPlan &plan)
    {
        std::vector<SpilloverPoint> out;
        for (double angle : steer_angles)
        {
            const FieldSlice slice = single_mode_slice(grid, base, mode, angle, z, plan);
            const double own = std::norm(demultiplex(slice, mode, rx_radius));
            const double side = std::norm(demultiplex(slice, mode - 1, rx_radius)) +
                                std::norm(demultiplex(slice, mode + 1, rx_radius));
            if (own == 0.0)
                throw NumericError("steered beam carries no power into its own filter");
            out.push_back({angle, power_ratio_db(side, own)});
        }
        return out;
    }

    void LinkBudgetSpec::validate() const
    {
        if (!(target_rate > 0.0) || !std::isfinite(target_rate))
            throw InvalidArgument("target rate must be positive");
        if (n_modes < 1)
            throw InvalidArgument("at least one mode is required");
        if (qam_order < 2 || (qam_order & (qam_order - 1)) != 0)
            throw InvalidArgument("QAM order must be a power of two, at least 2");
    }

    double required_bandwidth(const LinkBudgetSpec &spec)
    {
        spec.validate();
        int bits = 0;
        for (std::int64_t q = spec.qam_order; q > 1; q >>= 1)
            ++bits;
        return spec.target_rate / (static_cast<double>(spec.n_modes) * static_cast<double>(bits));
    }

    std::vector<BandwidthRow> bandwidth_table(double target_rate, std::span<const std::int64_t> mode_counts,
                                              std::span<const std::int64_t> qam_orders)
    {
        std::vector<BandwidthRow> rows;
        for (std::int64_t m : mode_counts)
            for (std::int64_t q : qam_orders)
                rows.push_back({m, q, required_bandwidth({target_rate, m, q})});
        return rows;
    }

} // namespace thzwave
