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

// thzwave command-line front end.
//
//   thzwave run configs/fig3.ini
//   thzwave preset fig5 --out out/fig5
//   thzwave capacity --rate 1e12 --modes 32 --qam 16 1024
//   thzwave blockage --preset fig4-ci --out out/blk
//
// Exit codes: 0 ok, 2 config, 3 numeric/sampling, 4 io.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "thzwave/errors.hpp"
#include "thzwave/oam_link.hpp"
#include "thzwave/parallel.hpp"
#include "thzwave/scenario.hpp"

namespace
{
    using namespace thzwave;

    struct Common
    {
        std::size_t threads = 0;
        std::string format;
        std::optional<double> db_floor;
        std::string out;
    };

    struct Source
    {
        std::string config;
        std::string preset;
    };

    RunOptions options_from(const Common &c)
    {
        RunOptions o;
        if (!c.out.empty())
            o.output_directory = c.out;
        if (c.format == "csv")
            o.csv_only = true;
        else if (c.format == "png")
            o.image_format = ImageFormat::png;
        else if (c.format == "pgm")
            o.image_format = ImageFormat::pgm;
        o.db_floor = c.db_floor;
        return o;
    }

    ScenarioConfig load(const Source &s)
    {
        if (!s.config.empty() && !s.preset.empty())
            throw ConfigError("", "give either a config file or --preset, not both");
        if (!s.preset.empty())
            return preset(s.preset);
        if (s.config.empty())
            throw ConfigError("", "a config file or --preset is required");
        return load_scenario(s.config);
    }

    void report(const RunManifest &m, const std::filesystem::path &dir)
    {
        for (const auto &a : m.artifacts)
            std::cout << (dir / a.path).string() << "  " << a.sha256 << "\n";
        for (const auto &t : m.timings)
            std::fprintf(stderr, "%-11s %8.2f s\n", t.stage.c_str(), t.seconds);
    }

    int run(const ScenarioConfig &config, const Common &common, std::optional<Stage> only = std::nullopt)
    {
        RunOptions o = options_from(common);
        o.only = only;
        const RunManifest m = run_scenario(config, o);
        report(m, o.output_directory.value_or(config.output.directory));
        return 0;
    }

    template <typename Fn>
    int guarded(Fn &&fn)
    {
        try
        {
            return fn();
        }
        catch (const ConfigError &e)
        {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
        catch (const InvalidArgument &e)
        {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
        catch (const SamplingError &e)
        {
            std::cerr << "sampling error: " << e.what() << " (try pad_factor >= " << e.pad_factor_hint() << ")\n";
            return 3;
        }
        catch (const NumericError &e)
        {
            std::cerr << "numeric error: " << e.what() << "\n";
            return 3;
        }
        catch (const IoError &e)
        {
            std::cerr << "io error: " << e.what() << "\n";
            return 4;
        }
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"thzwave: near-field terahertz wavefront synthesis, propagation and link metrics"};
    app.set_version_flag("--version", std::string(toolkit_version()));
    app.require_subcommand(1);

    Common common;
    app.add_option("--threads", common.threads, "worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--format", common.format, "csv (no images), pgm or png")
        ->check(CLI::IsMember({"csv", "pgm", "png"}));
    app.add_option("--db-floor", common.db_floor, "lower clamp for dB intensity images");

    // run <config>
    auto *run_cmd = app.add_subcommand("run", "run every stage of a scenario file");
    std::string run_path;
    run_cmd->add_option("config", run_path, "scenario INI file")->required();
    run_cmd->add_option("--out", common.out, "output directory (overrides [output] directory)");

    // preset <name> --out <dir>
    auto *preset_cmd = app.add_subcommand("preset", "run a built-in scenario");
    std::string preset_name, dump_path;
    bool list = false;
    preset_cmd->add_option("name", preset_name, "preset name");
    preset_cmd->add_option("--out", common.out, "output directory");
    preset_cmd->add_option("--write-config", dump_path, "write the preset as INI instead of running it");
    preset_cmd->add_flag("--list", list, "list preset names");

    // Stage verbs: same scenario sources, one stage.
    struct StageVerb
    {
        const char *name;
        Stage stage;
        const char *help;
    };
    const StageVerb verbs[] = {
        {"synthesize", Stage::synthesize, "phase maps and design parameters"},
        {"propagate", Stage::propagate, "field slices at the configured distances"},
        {"gain-curve", Stage::gain_curve, "normalized gain along the axis"},
        {"blockage", Stage::blockage, "obstacle shadow and self-healing metrics"},
        {"oam-crosstalk", Stage::crosstalk, "OAM coupling matrix and steering spillover"},
    };
    std::vector<std::pair<CLI::App *, Stage>> stage_cmds;
    Source source;
    for (const auto &v : verbs)
    {
        auto *cmd = app.add_subcommand(v.name, v.help);
        cmd->add_option("config", source.config, "scenario INI file");
        cmd->add_option("--preset", source.preset, "built-in scenario instead of a file");
        cmd->add_option("--out", common.out, "output directory");
        stage_cmds.emplace_back(cmd, v.stage);
    }

    // capacity: either a scenario or direct numbers.
    auto *cap_cmd = app.add_subcommand("capacity", "bandwidth needed for a target rate");
    double rate = 1e12;
    std::vector<std::int64_t> modes{1, 2, 4, 8, 16, 32}, qam{4, 16, 64, 256, 1024};
    cap_cmd->add_option("config", source.config, "scenario INI file");
    cap_cmd->add_option("--preset", source.preset, "built-in scenario instead of a file");
    cap_cmd->add_option("--rate", rate, "target rate in bit/s")->capture_default_str();
    cap_cmd->add_option("--modes", modes, "OAM mode counts");
    cap_cmd->add_option("--qam", qam, "QAM orders");
    cap_cmd->add_option("--out", common.out, "write bandwidth.csv here instead of printing");

    CLI11_PARSE(app, argc, argv);
    set_thread_count(common.threads);

    return guarded([&]() -> int {
        if (*run_cmd)
            return run(load_scenario(run_path), common);
        if (*preset_cmd)
        {
            if (list)
            {
                for (const auto &n : preset_names())
                    std::cout << n << "\n";
                return 0;
            }
            if (preset_name.empty())
                throw ConfigError("", "preset name required (see --list)");
            const ScenarioConfig c = preset(preset_name);
            if (!dump_path.empty())
            {
                write_file(dump_path, to_ini(c));
                return 0;
            }
            return run(c, common);
        }
        for (const auto &[cmd, stage] : stage_cmds)
            if (*cmd)
                return run(load(source), common, stage);
        if (*cap_cmd)
        {
            if (!source.config.empty() || !source.preset.empty())
                return run(load(source), common, Stage::capacity);
            if (!common.out.empty())
            {
                ScenarioConfig c;
                c.name = "capacity";
                c.capacity = CapacityStage{rate, modes, qam};
                c.output.directory = common.out;
                return run(c, common, Stage::capacity);
            }
            std::cout << "n_modes,qam_order,bandwidth_hz\n";
            for (const auto &r : bandwidth_table(rate, modes, qam))
                std::cout << r.n_modes << "," << r.qam_order << "," << format_number(r.bandwidth) << "\n";
            return 0;
        }
        return 2;
    });
}
