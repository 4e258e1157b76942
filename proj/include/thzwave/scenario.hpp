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

#ifndef THZWAVE_SCENARIO_HPP
#define THZWAVE_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thzwave/aperture.hpp"
#include "thzwave/io.hpp"
#include "thzwave/propagation.hpp"
#include "thzwave/wavefront.hpp"

namespace thzwave
{
    std::string_view toolkit_version() noexcept;

    struct GridConfig
    {
        double side_length = 0.25;
        double frequency = 1e12;
        double pitch_fraction = 0.5;
    };

    struct NamedWavefront
    {
        std::string name;
        WavefrontSpec spec; // spec.label == name
    };

    struct NamedObstacle
    {
        std::string name;
        ObstacleSpec spec;
        std::vector<std::string> wavefronts; // beams sent against this obstacle
        std::optional<double> eval_z;        // empty = plane_z + 2 * shadow length of the first Bessel beam
        std::optional<double> rx_radius;     // empty = whole slice
        bool rx_radius_auto = true;          // Bessel first-null radius when rx_radius is empty
    };

    struct SynthesizeStage
    {
        std::vector<std::string> wavefronts; // empty = all
    };

    struct PropagateStage
    {
        std::vector<std::string> wavefronts; // empty = all
        std::vector<double> z_values;
        bool direct = false;         // direct summation on the aperture-sized plane
        bool crop_to_aperture = true;
    };

    struct GainCurveStage
    {
        std::vector<std::string> wavefronts; // empty = all
        std::vector<double> distances;
    };

    struct BlockageStage
    {
        std::vector<double> slice_z; // planes reported per slice, in addition to each evaluation plane
    };

    struct CrosstalkStage
    {
        std::string base; // wavefront name
        std::vector<int> modes;
        double z = 1.0;
        std::optional<double> rx_radius; // empty = aperture half-side
        double steer_angle = 0.0;        // rad, for the matrix
        std::vector<double> spillover_angles; // rad
        int spillover_mode = 1;
    };

    struct CapacityStage
    {
        double target_rate = 1e12;
        std::vector<std::int64_t> mode_counts;
        std::vector<std::int64_t> qam_orders;
    };

    struct OutputConfig
    {
        std::string directory = "out";
        bool csv = true;
        std::optional<ImageFormat> image;
        IntensityScale scale = IntensityScale::db;
        double db_floor = -60.0;
    };

    struct ScenarioConfig
    {
        std::string name = "scenario";
        std::uint64_t seed = 0;
        GridConfig grid;
        PropagationPlan plan;
        std::vector<NamedWavefront> wavefronts;
        std::vector<NamedObstacle> obstacles;

        std::optional<SynthesizeStage> synthesize;
        std::optional<PropagateStage> propagate;
        std::optional<GainCurveStage> gain_curve;
        std::optional<BlockageStage> blockage;
        std::optional<CrosstalkStage> crosstalk;
        std::optional<CapacityStage> capacity;

        OutputConfig output;

        /// Cross-reference checks; throws ConfigError naming the key path.
        void validate() const;
        const NamedWavefront &wavefront(const std::string &name) const;
    };

    /// INI text: [scenario] [grid] [propagation] [wavefront.NAME] [obstacle.NAME]
    /// [synthesize] [propagate] [gain_curve] [blockage] [crosstalk] [capacity]
    /// [output]. Unknown sections or keys are rejected.
    ScenarioConfig parse_scenario(std::string_view ini_text);
    ScenarioConfig load_scenario(const std::filesystem::path &path);

    /// Canonical INI form; parse_scenario(to_ini(c)) reproduces c.
    std::string to_ini(const ScenarioConfig &config);

    /// fig3, fig4, fig5 at full scale; fig3-ci, fig4-ci at 300 GHz with a 5 cm aperture.
    ScenarioConfig preset(std::string_view name);
    std::vector<std::string> preset_names();

    enum class Stage
    {
        synthesize,
        propagate,
        gain_curve,
        blockage,
        crosstalk,
        capacity,
    };

    std::string_view to_string(Stage stage) noexcept;

    struct RunOptions
    {
        std::optional<std::filesystem::path> output_directory;
        std::optional<Stage> only;
        std::optional<ImageFormat> image_format;
        std::optional<double> db_floor;
        bool csv_only = false; // --format csv: no images
    };

    struct ArtifactRecord
    {
        std::string path; // relative to the output directory
        std::string sha256;
        std::uint64_t bytes = 0;
    };

    struct StageTiming
    {
        std::string stage;
        double seconds = 0.0;
    };

    struct RunManifest
    {
        std::string scenario;
        std::string toolkit_version;
        std::string config_digest; // SHA-256 of to_ini(config)
        std::vector<ArtifactRecord> artifacts;
        std::vector<StageTiming> timings;

        std::string to_json() const;
    };

    /// Runs every configured stage and writes manifest.json next to the artifacts.
    RunManifest run_scenario(const ScenarioConfig &config, const RunOptions &options = {});

} // namespace thzwave

#endif
