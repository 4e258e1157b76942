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

#include <filesystem>

#include "thzwave/errors.hpp"
#include "thzwave/io.hpp"

using namespace thzwave;

TEST_CASE("numbers print with 9 significant digits")
{
    CHECK(format_number(7.8125e9) == "7.8125e9");
    CHECK(format_number(3.125e9) == "3.125e9");
    CHECK(format_number(1e-5) == "1e-5");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(-2.5) == "-2.5");
    CHECK(format_number(123456789012.0) == "1.23456789e11");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(format_number(NAN) == "nan");
}

TEST_CASE("csv tables are LF separated")
{
    CHECK(csv_table({"a", "b"}, {{"1", "2"}, {"3", "4"}}) == "a,b\n1,2\n3,4\n");
}

TEST_CASE("image levels and encoders")
{
    Array2D<double> i(2, 3);
    i(0, 0) = 1.0;  // y = row 0 is the smallest y, so it lands on the bottom image row
    i(1, 2) = 0.5;
    const auto lin = intensity_levels(i, IntensityScale::linear);
    CHECK(lin(1, 0) == 65535);
    CHECK(lin(0, 2) == 32768);
    CHECK(lin(0, 0) == 0);

    const auto db = intensity_levels(i, IntensityScale::db, -60.0);
    CHECK(db(1, 0) == 65535);
    CHECK(db(0, 0) == 0); // below the floor

    const std::string pgm = encode_pgm16(lin);
    CHECK(pgm.rfind("P5\n3 2\n65535\n", 0) == 0);
    CHECK(pgm.size() == std::string("P5\n3 2\n65535\n").size() + 12);
    // big-endian samples: first pixel of row 0 is lin(0, 0) = 0, then 0...
    CHECK(static_cast<unsigned char>(pgm[pgm.size() - 12 + 6]) == 0xff); // lin(1, 0) high byte

    const std::string png = encode_png16(lin);
    CHECK(png.substr(1, 3) == "PNG");
    CHECK(encode_image(lin, ImageFormat::png) == png);
}

TEST_CASE("SHA-256 test vectors")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("file round trip and io errors")
{
    const auto p = std::filesystem::temp_directory_path() / "thzwave_io_test" / "x.bin";
    std::filesystem::create_directories(p.parent_path());
    write_file(p, std::string("a\0b", 3));
    CHECK(read_file(p) == std::string("a\0b", 3));
    CHECK_THROWS_AS(read_file(p.parent_path() / "missing"), IoError);
    CHECK_THROWS_AS(write_file("/proc/no/such/dir/file", "x"), IoError);
}
