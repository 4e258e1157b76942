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

#include "thzwave/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <openssl/evp.h>
#include <png.h>

#include "thzwave/constants.hpp"
#include "thzwave/errors.hpp"

namespace thzwave
{
    std::string format_number(double value)
    {
        if (std::isnan(value))
            return "nan";
        if (std::isinf(value))
            return value > 0 ? "inf" : "-inf";
        if (value == 0.0)
            return "0"; // also folds -0
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", value);
        std::string s(buf);
        // %g writes e+09 / e-05; trim to e9 / e-5.
        const auto e = s.find('e');
        if (e == std::string::npos)
            return s;
        std::string mant = s.substr(0, e);
        std::string exp = s.substr(e + 1);
        const bool neg = exp[0] == '-';
        exp = exp.substr(1);
        exp.erase(0, std::min(exp.find_first_not_of('0'), exp.size() - 1));
        return mant + "e" + (neg ? "-" : "") + exp;
    }

    std::string csv_table(const std::vector<std::string> &header, const std::vector<std::vector<std::string>> &rows)
    {
        auto join = [](const std::vector<std::string> &cells) {
            std::string line;
            for (std::size_t i = 0; i < cells.size(); ++i)
            {
                if (i)
                    line += ',';
                line += cells[i];
            }
            line += '\n';
            return line;
        };
        std::string out = join(header);
        for (const auto &row : rows)
        {
            if (row.size() != header.size())
                throw InvalidArgument("CSV row width does not match the header");
            out += join(row);
        }
        return out;
    }

    std::string slice_csv(const FieldSlice &slice)
    {
        std::string out = "x,y,re,im,intensity\n";
        const PlaneSampling &s = slice.sampling;
        for (std::size_t r = 0; r < s.rows; ++r)
            for (std::size_t c = 0; c < s.cols; ++c)
            {
                const Complex v = slice.samples(r, c);
                out += format_number(s.x(c)) + ',' + format_number(s.y(r)) + ',' + format_number(v.real()) + ',' +
                       format_number(v.imag()) + ',' + format_number(std::norm(v)) + '\n';
            }
        return out;
    }

    std::string phase_csv(const PhaseMap &map)
    {
        std::string out;
        for (std::size_t r = 0; r < map.rows(); ++r)
        {
            for (std::size_t c = 0; c < map.cols(); ++c)
            {
                if (c)
                    out += ',';
                out += format_number(map(r, c));
            }
            out += '\n';
        }
        return out;
    }

    Array2D<std::uint16_t> intensity_levels(const Array2D<double> &intensity, IntensityScale scale, double db_floor)
    {
        if (scale == IntensityScale::db && !(db_floor < 0.0))
            throw InvalidArgument("dB floor must be negative");
        const double peak = intensity.empty() ? 0.0 : *std::max_element(intensity.begin(), intensity.end());
        const std::size_t rows = intensity.rows(), cols = intensity.cols();
        Array2D<std::uint16_t> out(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
            {
                const double v = peak > 0.0 ? intensity(r, c) / peak : 0.0;
                double level;
                if (scale == IntensityScale::linear)
                    level = v;
                else
                {
                    const double db = v > 0.0 ? 10.0 * std::log10(v) : db_floor;
                    level = (std::max(db, db_floor) - db_floor) / -db_floor;
                }
                out(rows - 1 - r, c) = static_cast<std::uint16_t>(std::lround(std::clamp(level, 0.0, 1.0) * 65535.0));
            }
        return out;
    }

    Array2D<std::uint16_t> phase_levels(const PhaseMap &map)
    {
        const std::size_t rows = map.rows(), cols = map.cols();
        Array2D<std::uint16_t> out(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
            {
                const double level = std::floor(map(r, c) / kTwoPi * 65536.0);
                out(rows - 1 - r, c) = static_cast<std::uint16_t>(std::clamp(level, 0.0, 65535.0));
            }
        return out;
    }

    std::string encode_pgm16(const Array2D<std::uint16_t> &image)
    {
        std::string out = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n65535\n";
        out.reserve(out.size() + 2 * image.size());
        for (std::uint16_t v : image)
        {
            out += static_cast<char>(v >> 8);
            out += static_cast<char>(v & 0xff);
        }
        return out;
    }

    std::string encode_png16(const Array2D<std::uint16_t> &image)
    {
        if (image.empty())
            throw InvalidArgument("cannot encode an empty image");
        png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (!png)
            throw IoError("libpng initialisation failed");
        png_infop info = png_create_info_struct(png);
        if (!info)
        {
            png_destroy_write_struct(&png, nullptr);
            throw IoError("libpng initialisation failed");
        }

        std::string out;
        std::vector<png_byte> row(2 * image.cols());
        if (setjmp(png_jmpbuf(png)))
        {
            png_destroy_write_struct(&png, &info);
            throw IoError("PNG encoding failed");
        }
        png_set_write_fn(
            png, &out,
            [](png_structp p, png_bytep data, png_size_t len) {
                static_cast<std::string *>(png_get_io_ptr(p))->append(reinterpret_cast<const char *>(data), len);
            },
            [](png_structp) {});
        png_set_IHDR(png, info, static_cast<png_uint_32>(image.cols()), static_cast<png_uint_32>(image.rows()), 16,
                     PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_set_compression_level(png, 6);
        png_write_info(png, info);
        for (std::size_t r = 0; r < image.rows(); ++r)
        {
            for (std::size_t c = 0; c < image.cols(); ++c)
            {
                const std::uint16_t v = image(r, c);
                row[2 * c] = static_cast<png_byte>(v >> 8);
                row[2 * c + 1] = static_cast<png_byte>(v & 0xff);
            }
            png_write_row(png, row.data());
        }
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
        return out;
    }

    std::string encode_image(const Array2D<std::uint16_t> &image, ImageFormat format)
    {
        return format == ImageFormat::png ? encode_png16(image) : encode_pgm16(image);
    }

    void write_file(const std::filesystem::path &path, std::string_view bytes)
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw IoError("cannot open " + path.string() + " for writing");
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f)
            throw IoError("failed writing " + path.string());
    }

    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw IoError("cannot open " + path.string());
        return std::string(std::istreambuf_iterator<char>(f), {});
    }

    std::string sha256_hex(std::string_view bytes)
    {
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
            throw IoError("SHA-256 digest failed");
        static constexpr char hex[] = "0123456789abcdef";
        std::string out;
        for (unsigned int i = 0; i < len; ++i)
        {
            out += hex[digest[i] >> 4];
            out += hex[digest[i] & 0xf];
        }
        return out;
    }

} // namespace thzwave
