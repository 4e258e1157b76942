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

#include <nlohmann/json.hpp>

#include "thzwave/errors.hpp"
#include "thzwave/scenario.hpp"

using namespace thzwave;
namespace fs = std::filesystem;

namespace
{
    const fs::path source_dir = THZWAVE_SOURCE_DIR;

    fs::path scratch(const std::string &name)
    {
        const fs::path p = fs::temp_directory_path() / "thzwave_scenario_test" / name;
        fs::remove_all(p);
        return p;
    }

    std::string key_path_of(std::string_view ini)
    {
        try
        {
            (void)parse_scenario(ini);
        }
        catch (const ConfigError &e)
        {
            return e.key_path();
        }
        return "<accepted>";
    }

    const char *kCapacityOnly = "[capacity]\ntarget_rate = 1e12\nmode_counts = 1\nqam_orders = 4\n";
} // namespace

TEST_CASE("presets carry the documented parameters")
{
    const ScenarioConfig f3 = preset("fig3");
    CHECK(make_grid(f3.grid.side_length, f3.grid.frequency, f3.grid.pitch_fraction).elements_per_side() == 1667);
    CHECK(f3.wavefront("bessel").spec.spot_size == 0.02);
    CHECK(f3.gain_curve->distances.front() == 1.0);
    CHECK(f3.gain_curve->distances.back() == 30.0);

    const ScenarioConfig f4 = preset("fig4");
    CHECK(f4.obstacles.at(0).spec.size == 0.025);
    CHECK(f4.obstacles.at(0).spec.plane_z == 3.0);
    CHECK(f4.wavefronts.size() == 4);
    CHECK(f4.blockage->slice_z.back() == 15.0);

    const ScenarioConfig f5 = preset("fig5");
    CHECK(f5.capacity->target_rate == 1e12);

    CHECK_THROWS_AS(preset("fig9"), InvalidArgument);
}

TEST_CASE("every preset round-trips through INI and matches its shipped config")
{
    for (const auto &name : preset_names())
    {
        INFO(name);
        const std::string text = to_ini(preset(name));
        CHECK(to_ini(parse_scenario(text)) == text);
        CHECK(to_ini(load_scenario(source_dir / "configs" / (name + ".ini"))) == text);
    }
}

TEST_CASE("config errors name the offending key")
{
    CHECK(key_path_of(std::string("[grid]\nsidelength = 1\n") + kCapacityOnly) == "grid.sidelength");
    CHECK(key_path_of(std::string("[grids]\n") + kCapacityOnly) == "grids");
    CHECK(key_path_of(std::string("[grid]\nside_length = abc\nfrequency = 1e12\n") + kCapacityOnly) ==
          "grid.side_length");
    CHECK(key_path_of(std::string("[grid]\nfrequency = 1e12\n") + kCapacityOnly) == "grid.side_length");
    CHECK(key_path_of("[gain_curve]\nz_values = 1 2\n") == "wavefronts");
    CHECK(key_path_of("[wavefront.a]\nkind = laser\n[gain_curve]\nz_values = 1\n") == "wavefront.a.kind");
    CHECK(key_path_of("[wavefront.a]\nspot_size = 1\n[gain_curve]\nz_values = 1\n") == "wavefront.a.kind");
    CHECK(key_path_of("[wavefront.a]\nkind = planar\n[gain_curve]\nwavefronts = b\nz_values = 1\n") ==
          "gain_curve.wavefronts");
    CHECK(key_path_of("[wavefront.a]\nkind = planar\n[gain_curve]\nz_values = 2 1\n") == "gain_curve.z_values");
    CHECK(key_path_of("[wavefront.a]\nkind = planar\n[gain_curve]\nz_values = 1\nz_start = 1\n") ==
          "gain_curve.z_values");
    CHECK(key_path_of("[wavefront.a]\nkind = bessel\n[gain_curve]\nz_values = 1\n") == "wavefront.a.spot_size");
    CHECK(key_path_of("[wavefront.a]\nkind = planar\n[blockage]\nslice_z_values = 1\n") == "obstacles");
    CHECK(key_path_of("[capacity]\ntarget_rate = 1e12\nmode_counts = 1\nqam_orders = 12\n") == "capacity");
    CHECK(key_path_of("[scenario]\nname = x\n") == "scenario");
    CHECK(key_path_of(std::string("[propagation]\npad_factor = 9\n") + kCapacityOnly) == "propagation.pad_factor");
    CHECK(key_path_of(kCapacityOnly) == "<accepted>");
}

TEST_CASE("a stage section without keys still enables the stage")
{
    const ScenarioConfig c =
        parse_scenario("[grid]\nside_length = 0.01\nfrequency = 1e12\n[wavefront.a]\nkind = planar\n[synthesize]\n");
    REQUIRE(c.synthesize.has_value());
    CHECK(to_ini(parse_scenario(to_ini(c))) == to_ini(c));
}

TEST_CASE("running fig5 writes the bandwidth table and a consistent manifest")
{
    const fs::path out = scratch("fig5");
    RunOptions o;
    o.output_directory = out;
    const RunManifest m = run_scenario(preset("fig5"), o);
    const std::string csv = read_file(out / "bandwidth.csv");
    CHECK(csv.rfind("n_modes,qam_order,bandwidth_hz\n", 0) == 0);
    CHECK(csv.find("\n32,16,7.8125e9\n") != std::string::npos);
    CHECK(csv.find("\n32,1024,3.125e9\n") != std::string::npos);

    REQUIRE(m.artifacts.size() == 1);
    CHECK(m.artifacts[0].sha256 == sha256_hex(csv));
    CHECK(m.config_digest == sha256_hex(to_ini(preset("fig5"))));
    CHECK(m.toolkit_version == toolkit_version());

    const auto j = nlohmann::json::parse(read_file(out / "manifest.json"));
    CHECK(j["artifacts"][0]["path"] == "bandwidth.csv");
    CHECK(j["artifacts"][0]["bytes"] == csv.size());
    CHECK(j["stages"][0]["stage"] == "capacity");
}

TEST_CASE("fig3-ci gain curve layout")
{
    const fs::path out = scratch("fig3-ci");
    RunOptions o;
    o.output_directory = out;
    o.csv_only = true;
    const RunManifest m = run_scenario(preset("fig3-ci"), o);
    const std::string csv = read_file(out / "gain_curve.csv");
    CHECK(csv.rfind("z_m,beamforming,beamfocusing,bessel\n0.012,", 0) == 0);
    CHECK(csv.find("\n0.36,") != std::string::npos);
    for (const auto &a : m.artifacts)
        CHECK(a.path.find(".png") == std::string::npos);

    // only one stage on request
    const fs::path out2 = scratch("fig3-ci-synth");
    o.output_directory = out2;
    o.only = Stage::synthesize;
    run_scenario(preset("fig3-ci"), o);
    CHECK(fs::exists(out2 / "phase_bessel.csv"));
    CHECK_FALSE(fs::exists(out2 / "gain_curve.csv"));
    o.only = Stage::blockage;
    CHECK_THROWS_AS(run_scenario(preset("fig3-ci"), o), ConfigError);
}

TEST_CASE("unwritable output raises IoError")
{
    RunOptions o;
    o.output_directory = "/proc/thzwave/out";
    CHECK_THROWS_AS(run_scenario(preset("fig5"), o), IoError);
}
