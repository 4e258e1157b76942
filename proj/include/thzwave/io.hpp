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

#ifndef THZWAVE_IO_HPP
#define THZWAVE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "thzwave/aperture.hpp"
#include "thzwave/array2d.hpp"
#include "thzwave/propagation.hpp"

namespace thzwave
{
    /// 9 significant digits, shortest form: 7.8125e9, 0.25, -inf.
    std::string format_number(double value);

    /// Comma separated, LF line ends. Every row must match the header width.
    std::string csv_table(const std::vector<std::string> &header, const std::vector<std::vector<std::string>> &rows);

    /// x,y,re,im,intensity per sample, row-major.
    std::string slice_csv(const FieldSlice &slice);

    /// One line per grid row, radians.
    std::string phase_csv(const PhaseMap &map);

    enum class ImageFormat
    {
        pgm,
        png,
    };

    enum class IntensityScale
    {
        linear,
        db,
    };

    /// Peak-normalised intensity as 16-bit levels. In dB mode [db_floor, 0] maps
    /// onto the full range. Image row 0 is the largest y.
    Array2D<std::uint16_t> intensity_levels(const Array2D<double> &intensity, IntensityScale scale,
                                            double db_floor = -60.0);

    /// Phase [0, 2pi) onto [0, 65535], image row 0 is the largest y.
    Array2D<std::uint16_t> phase_levels(const PhaseMap &map);

    std::string encode_pgm16(const Array2D<std::uint16_t> &image);
    std::string encode_png16(const Array2D<std::uint16_t> &image);
    std::string encode_image(const Array2D<std::uint16_t> &image, ImageFormat format);

    void write_file(const std::filesystem::path &path, std::string_view bytes);
    std::string read_file(const std::filesystem::path &path);

    std::string sha256_hex(std::string_view bytes);

} // namespace thzwave

#endif
