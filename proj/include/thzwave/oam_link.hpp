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

#ifndef THZWAVE_OAM_LINK_HPP
#define THZWAVE_OAM_LINK_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "thzwave/aperture.hpp"
#include "thzwave/propagation.hpp"
#include "thzwave/wavefront.hpp"

namespace thzwave
{
    struct OamModeSet
    {
        std::vector<int> modes;
        std::vector<Complex> amplitudes; // empty = all 1

        void validate() const;
        Complex amplitude(std::size_t i) const { return amplitudes.empty() ? Complex(1.0, 0.0) : amplitudes[i]; }
    };

    /// weights = sum_l a_l * base(x, y) * e^{j l atan2(y, x)}
    ApertureField multiplex(const ApertureGrid &grid, const WavefrontSpec &base, const OamModeSet &modes);

    /// Matched helical filter: sum E e^{-j l phi} pitch^2 over the receiver disc.
    Complex demultiplex(const FieldSlice &slice, int mode, double rx_radius, double centre_x = 0.0,
                        double centre_y = 0.0);

    struct CrosstalkMatrix
    {
        std::vector<int> modes;
        // (rx, tx) = 10 log10(|<demux_rx, beam_tx>|^2 / |<demux_tx, beam_tx>|^2); -inf for exact zeros.
        Array2D<double> power_coupling_db;

        double coupling_db(int tx_mode, int rx_mode) const;
    };

    /// Each single-mode beam, steered by steer_angle in the x-z plane, is
    /// propagated to z and filtered against every mode about the unsteered axis.
    CrosstalkMatrix crosstalk_matrix(const ApertureGrid &grid, const WavefrontSpec &base, std::span<const int> modes,
                                     double z, double steer_angle, double rx_radius, const PropagationPlan &plan = {});

    struct SpilloverPoint
    {
        double steer_angle = 0.0;
        double neighbour_power_db = 0.0; // |s_{l-1}|^2 + |s_{l+1}|^2 relative to |s_l|^2
    };

    /// Power leaking from mode l into l +/- 1 as the beam is steered.
    std::vector<SpilloverPoint> steering_spillover(const ApertureGrid &grid, const WavefrontSpec &base, int mode,
                                                   std::span<const double> steer_angles, double z, double rx_radius,
                                                   const PropagationPlan &plan = {});

    struct LinkBudgetSpec
    {
        double target_rate = 0.0; // bit/s
        std::int64_t n_modes = 1;
        std::int64_t qam_order = 2;

        void validate() const;
    };

    /// B = R / (M log2 Q), ideal Nyquist signalling.
    double required_bandwidth(const LinkBudgetSpec &spec);

    struct BandwidthRow
    {
        std::int64_t n_modes = 0;
        std::int64_t qam_order = 0;
        double bandwidth = 0.0;
    };

    /// Rows ordered by mode count, then QAM order, as given.
    std::vector<BandwidthRow> bandwidth_table(double target_rate, std::span<const std::int64_t> mode_counts,
                                              std::span<const std::int64_t> qam_orders);

} // namespace thzwave

#endif
