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

#include "thzwave/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "thzwave/constants.hpp"
#include "thzwave/errors.hpp"
#include "thzwave/metrics.hpp"
#include "thzwave/oam_link.hpp"

#ifndef THZWAVE_VERSION
#define THZWAVE_VERSION "0.0.0"
#endif

namespace thzwave
{
    namespace
    {
        namespace pt = boost::property_tree;

        // ---- value parsing ----------------------------------------------------

        std::string trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return std::string(s.substr(b, e - b + 1));
        }

        // Inline "; ..." or "# ..." after a value.
        std::string_view strip_comment(std::string_view s)
        {
            for (std::size_t i = 1; i < s.size(); ++i)
                if ((s[i] == ';' || s[i] == '#') && (s[i - 1] == ' ' || s[i - 1] == '\t'))
                    return s.substr(0, i);
            return s;
        }

        std::vector<std::string> split_list(std::string_view s)
        {
            std::vector<std::string> out;
            std::string cur;
            for (char ch : s)
            {
                if (ch == ',' || ch == ' ' || ch == '\t')
                {
                    if (!cur.empty())
                        out.push_back(std::move(cur));
                    cur.clear();
                }
                else
                    cur += ch;
            }
            if (!cur.empty())
                out.push_back(std::move(cur));
            return out;
        }

        std::optional<double> to_double(std::string_view s)
        {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
                return std::nullopt;
            return v;
        }

        std::optional<std::int64_t> to_int(std::string_view s)
        {
            std::int64_t v = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size())
                return std::nullopt;
            return v;
        }

        // Shortest text that parses back to the same double.
        std::string exact(double v)
        {
            char buf[32];
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, ptr);
        }

        // 12 significant digits drop accumulated binary noise, so 0.012 + 0.006
        // is stored and written as 0.018.
        double tidy(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.12g", v);
            return std::strtod(buf, nullptr);
        }

        std::vector<double> linear_range(double start, double stop, double step)
        {
            const double count = std::round((stop - start) / step);
            std::vector<double> out;
            for (long i = 0; i <= static_cast<long>(count); ++i)
                out.push_back(tidy(start + static_cast<double>(i) * step));
            return out;
        }

        // One INI section with key bookkeeping so leftovers can be rejected.
        class Section
        {
        public:
            Section(std::string path, const pt::ptree &tree) : path_(std::move(path))
            {
                for (const auto &[key, child] : tree)
                {
                    if (!child.empty())
                        throw ConfigError(path_ + "." + key, "nested keys are not supported");
                    values_[key] = trim(strip_comment(child.data()));
                }
            }

            const std::string &path() const { return path_; }
            std::string key_path(const std::string &key) const { return path_ + "." + key; }

            std::optional<std::string> text(const std::string &key)
            {
                auto it = values_.find(key);
                if (it == values_.end())
                    return std::nullopt;
                used_.insert(key);
                return it->second;
            }

            // Missing required keys are reported by finish(), after unknown keys,
            // so a misspelt key is named as such.
            void require(const std::string &key)
            {
                auto v = text(key);
                if (!v || v->empty())
                    missing_.push_back(key);
            }

            std::string required_text(const std::string &key)
            {
                require(key);
                return text(key).value_or("");
            }

            std::optional<double> number(const std::string &key)
            {
                auto v = text(key);
                if (!v)
                    return std::nullopt;
                auto d = to_double(*v);
                if (!d)
                    throw ConfigError(key_path(key), "expected a number, got '" + *v + "'");
                return d;
            }

            double number(const std::string &key, double fallback) { return number(key).value_or(fallback); }

            double required_number(const std::string &key)
            {
                require(key);
                return number(key).value_or(0.0);
            }

            // number or the word auto (-> empty)
            std::optional<double> number_or_auto(const std::string &key, bool &present)
            {
                auto v = text(key);
                present = v.has_value();
                if (!v || *v == "auto")
                    return std::nullopt;
                auto d = to_double(*v);
                if (!d)
                    throw ConfigError(key_path(key), "expected a number or 'auto', got '" + *v + "'");
                return d;
            }

            std::optional<std::int64_t> integer(const std::string &key)
            {
                auto v = text(key);
                if (!v)
                    return std::nullopt;
                auto i = to_int(*v);
                if (!i)
                    throw ConfigError(key_path(key), "expected an integer, got '" + *v + "'");
                return i;
            }

            std::optional<bool> boolean(const std::string &key)
            {
                auto v = text(key);
                if (!v)
                    return std::nullopt;
                if (*v == "true")
                    return true;
                if (*v == "false")
                    return false;
                throw ConfigError(key_path(key), "expected true or false, got '" + *v + "'");
            }

            std::optional<std::vector<double>> numbers(const std::string &key)
            {
                auto v = text(key);
                if (!v)
                    return std::nullopt;
                std::vector<double> out;
                for (const auto &item : split_list(*v))
                {
                    auto d = to_double(item);
                    if (!d)
                        throw ConfigError(key_path(key), "expected numbers, got '" + item + "'");
                    out.push_back(*d);
                }
                return out;
            }

            std::optional<std::vector<std::int64_t>> integers(const std::string &key)
            {
                auto v = text(key);
                if (!v)
                    return std::nullopt;
                std::vector<std::int64_t> out;
                for (const auto &item : split_list(*v))
                {
                    auto i = to_int(item);
                    if (!i)
                        throw ConfigError(key_path(key), "expected integers, got '" + item + "'");
                    out.push_back(*i);
                }
                return out;
            }

            std::vector<std::string> names(const std::string &key)
            {
                auto v = text(key);
                return v ? split_list(*v) : std::vector<std::string>{};
            }

            /// `prefix_values` list or `prefix_start/stop/step` range.
            std::optional<std::vector<double>> sweep(const std::string &prefix)
            {
                auto values = numbers(prefix + "_values");
                auto start = number(prefix + "_start");
                auto stop = number(prefix + "_stop");
                auto step = number(prefix + "_step");
                const bool range = start || stop || step;
                if (values && range)
                    throw ConfigError(key_path(prefix + "_values"), "give either a list or a range, not both");
                if (values)
                    return values;
                if (!range)
                    return std::nullopt;
                if (!start || !stop || !step)
                    throw ConfigError(key_path(prefix + "_start"), "a range needs _start, _stop and _step");
                if (!(*step > 0.0) || !(*stop >= *start))
                    throw ConfigError(key_path(prefix + "_step"), "range needs step > 0 and stop >= start");
                return linear_range(*start, *stop, *step);
            }

            void finish() const
            {
                for (const auto &[key, value] : values_)
                    if (!used_.count(key))
                        throw ConfigError(key_path(key), "unknown key");
                if (!missing_.empty())
                    throw ConfigError(key_path(missing_.front()), "required key is missing");
            }

        private:
            std::string path_;
            std::map<std::string, std::string> values_;
            std::set<std::string> used_;
            std::vector<std::string> missing_;
        };

        template <typename Enum, std::size_t N>
        Enum parse_enum(Section &sec, const std::string &key, const std::array<std::pair<Enum, const char *>, N> &table,
                        Enum fallback)
        {
            auto v = sec.text(key);
            if (!v)
                return fallback;
            for (const auto &[e, name] : table)
                if (*v == name)
                    return e;
            std::string allowed;
            for (const auto &[e, name] : table)
                allowed += (allowed.empty() ? "" : ", ") + std::string(name);
            throw ConfigError(sec.key_path(key), "'" + *v + "' is not one of " + allowed);
        }

        template <typename Enum, std::size_t N>
        const char *enum_name(Enum value, const std::array<std::pair<Enum, const char *>, N> &table)
        {
            for (const auto &[e, name] : table)
                if (e == value)
                    return name;
            return "?";
        }

        constexpr std::array<std::pair<WavefrontKind, const char *>, 4> kKinds{{
            {WavefrontKind::planar, "planar"},
            {WavefrontKind::focusing, "focusing"},
            {WavefrontKind::bessel, "bessel"},
            {WavefrontKind::caustic, "caustic"},
        }};
        constexpr std::array<std::pair<SpotConvention, const char *>, 2> kConventions{{
            {SpotConvention::fwhm, "fwhm"},
            {SpotConvention::first_null, "first_null"},
        }};
        constexpr std::array<std::pair<ApertureShape, const char *>, 2> kShapes{{
            {ApertureShape::square, "square"},
            {ApertureShape::circular, "circular"},
        }};
        constexpr std::array<std::pair<ObstacleShape, const char *>, 3> kObstacles{{
            {ObstacleShape::disc, "disc"},
            {ObstacleShape::square, "square"},
            {ObstacleShape::half_plane, "half_plane"},
        }};
        constexpr std::array<std::pair<IntensityScale, const char *>, 2> kScales{{
            {IntensityScale::linear, "linear"},
            {IntensityScale::db, "db"},
        }};
        constexpr std::array<std::pair<Stage, const char *>, 6> kStages{{
            {Stage::synthesize, "synthesize"},
            {Stage::propagate, "propagate"},
            {Stage::gain_curve, "gain_curve"},
            {Stage::blockage, "blockage"},
            {Stage::crosstalk, "crosstalk"},
            {Stage::capacity, "capacity"},
        }};

        bool valid_name(const std::string &name)
        {
            return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
            });
        }

        NamedWavefront parse_wavefront(const std::string &name, Section &sec)
        {
            NamedWavefront w;
            w.name = name;
            WavefrontSpec &s = w.spec;
            s.label = name;
            sec.require("kind");
            s.kind = parse_enum(sec, "kind", kKinds, WavefrontKind::planar);
            const double theta = sec.number("steer_theta_deg", 0.0);
            const double phi = sec.number("steer_phi_deg", 0.0);
            s.steer = theta == 0.0 ? Direction{} : Direction::from_angles(deg_to_rad(theta), deg_to_rad(phi));
            bool present = false;
            s.focal_length = sec.number_or_auto("focal_length", present);
            if (auto v = sec.number("spot_size"))
                s.spot_size = *v;
            s.spot_convention = parse_enum(sec, "spot_convention", kConventions, SpotConvention::fwhm);
            if (auto v = sec.numbers("caustic_coefficients"))
                s.caustic_coefficients = *v;
            s.caustic_z_end = sec.number("caustic_z_end", 0.0);
            s.oam_mode = static_cast<int>(sec.integer("oam_mode").value_or(0));
            s.aperture = parse_enum(sec, "aperture", kShapes, ApertureShape::square);
            s.taper_waist = sec.number("taper_waist");
            s.quantize_bits = static_cast<int>(sec.integer("quantize_bits").value_or(0));
            sec.finish();

            if (s.kind == WavefrontKind::bessel && !(s.spot_size > 0.0))
                throw ConfigError(sec.key_path("spot_size"), "Bessel wavefront needs a positive spot_size");
            if (s.kind == WavefrontKind::caustic)
            {
                if (s.caustic_coefficients.empty())
                    throw ConfigError(sec.key_path("caustic_coefficients"), "caustic wavefront needs coefficients");
                if (!(s.caustic_z_end > 0.0))
                    throw ConfigError(sec.key_path("caustic_z_end"), "caustic wavefront needs caustic_z_end > 0");
            }
            if (s.focal_length && !(*s.focal_length > 0.0))
                throw ConfigError(sec.key_path("focal_length"), "focal length must be positive");
            if (s.quantize_bits < 0 || s.quantize_bits > 16)
                throw ConfigError(sec.key_path("quantize_bits"), "must lie in 0..16 (0 = continuous)");
            if (s.taper_waist && !(*s.taper_waist > 0.0))
                throw ConfigError(sec.key_path("taper_waist"), "must be positive");
            return w;
        }

        NamedObstacle parse_obstacle(const std::string &name, Section &sec)
        {
            NamedObstacle o;
            o.name = name;
            sec.require("shape");
            o.spec.shape = parse_enum(sec, "shape", kObstacles, ObstacleShape::disc);
            o.spec.size = sec.number("size", 0.0);
            o.spec.center_x = sec.number("center_x", 0.0);
            o.spec.center_y = sec.number("center_y", 0.0);
            o.spec.plane_z = sec.required_number("plane_z");
            o.wavefronts = sec.names("wavefronts");
            bool present = false;
            o.eval_z = sec.number_or_auto("eval_z", present);
            auto rx = sec.text("rx_radius");
            if (rx && *rx == "none")
                o.rx_radius_auto = false;
            else if (rx && *rx != "auto")
            {
                auto d = to_double(*rx);
                if (!d || !(*d > 0.0))
                    throw ConfigError(sec.key_path("rx_radius"), "expected a positive number, 'auto' or 'none'");
                o.rx_radius = d;
                o.rx_radius_auto = false;
            }
            sec.finish();
            if (!(o.spec.size >= 0.0))
                throw ConfigError(sec.key_path("size"), "must be non-negative");
            if (!(o.spec.plane_z > 0.0))
                throw ConfigError(sec.key_path("plane_z"), "must be positive");
            return o;
        }

        // ---- artifacts -----------------------------------------------------------

        class ArtifactWriter
        {
        public:
            explicit ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {}

            void emit(const std::string &relative, std::string_view bytes)
            {
                write_file(root_ / relative, bytes);
                records_.push_back({relative, sha256_hex(bytes), static_cast<std::uint64_t>(bytes.size())});
            }

            std::vector<ArtifactRecord> take() { return std::move(records_); }

        private:
            std::filesystem::path root_;
            std::vector<ArtifactRecord> records_;
        };

        struct StageContext
        {
            const ScenarioConfig &config;
            const RunOptions &options;
            ArtifactWriter &out;
            ApertureGrid grid;
            bool csv;
            std::optional<ImageFormat> image;
            IntensityScale scale;
            double db_floor;

            std::string image_ext() const { return *image == ImageFormat::png ? ".png" : ".pgm"; }

            void emit_intensity(const std::string &stem, const Array2D<double> &intensity)
            {
                if (image)
                    out.emit(stem + image_ext(), encode_image(intensity_levels(intensity, scale, db_floor), *image));
            }
        };

        std::vector<const NamedWavefront *> select(const ScenarioConfig &c, const std::vector<std::string> &names)
        {
            std::vector<const NamedWavefront *> out;
            if (names.empty())
                for (const auto &w : c.wavefronts)
                    out.push_back(&w);
            else
                for (const auto &n : names)
                    out.push_back(&c.wavefront(n));
            return out;
        }

        std::string num(double v) { return format_number(v); }

        // ---- stages ----------------------------------------------------------------

        void run_synthesize(StageContext &ctx, const SynthesizeStage &stage)
        {
            std::vector<std::vector<std::string>> rows;
            for (const NamedWavefront *w : select(ctx.config, stage.wavefronts))
            {
                WavefrontSpec spec = w->spec;
                if (spec.kind == WavefrontKind::focusing && !spec.focal_length)
                    throw ConfigError("wavefront." + w->name + ".focal_length",
                                      "synthesize needs an explicit focal length");
                const SynthesizedWavefront s = synthesize(ctx.grid, spec);
                Array2D<double> raw(s.field.weights().rows(), s.field.weights().cols());
                for (std::size_t i = 0; i < raw.size(); ++i)
                    raw.values()[i] = std::arg(s.field.weights().values()[i]);
                const PhaseMap total = PhaseMap::from_raw(std::move(raw));
                if (ctx.csv)
                    ctx.out.emit("phase_" + w->name + ".csv", phase_csv(total));
                if (ctx.image)
                    ctx.out.emit("phase_" + w->name + ctx.image_ext(), encode_image(phase_levels(total), *ctx.image));

                rows.push_back({w->name, "elements_per_side", std::to_string(ctx.grid.elements_per_side())});
                rows.push_back({w->name, "radiated_power", num(s.field.power())});
                if (s.axicon)
                {
                    rows.push_back({w->name, "radial_wavenumber", num(s.axicon->radial_wavenumber)});
                    rows.push_back({w->name, "cone_angle", num(s.axicon->cone_angle)});
                    rows.push_back({w->name, "z_max", num(s.axicon->z_max)});
                    rows.push_back({w->name, "ring_count_within_aperture",
                                    std::to_string(s.axicon->ring_count_within_aperture)});
                }
            }
            ctx.out.emit("design.csv", csv_table({"wavefront", "quantity", "value"}, rows));
        }

        void run_propagate(StageContext &ctx, const PropagateStage &stage)
        {
            const std::size_t n = ctx.grid.elements_per_side();
            std::vector<std::vector<std::string>> stats;
            for (const NamedWavefront *w : select(ctx.config, stage.wavefronts))
            {
                if (w->spec.kind == WavefrontKind::focusing && !w->spec.focal_length)
                    throw ConfigError("wavefront." + w->name + ".focal_length",
                                      "propagate needs an explicit focal length");
                const ApertureField field = synthesize(ctx.grid, w->spec).field;
                std::optional<AngularSpectrum> spectrum;
                if (!stage.direct)
                    spectrum.emplace(field, ctx.config.plan);
                for (double z : stage.z_values)
                {
                    FieldSlice slice = stage.direct ? propagate_direct_plane(field, ctx.grid.sampling(), z)
                                                    : spectrum->at(z);
                    if (!stage.direct && stage.crop_to_aperture)
                        slice = slice.crop(n, n);
                    const std::string stem = "slice_" + w->name + "_z" + num(z);
                    if (ctx.csv)
                        ctx.out.emit(stem + ".csv", slice_csv(slice));
                    ctx.emit_intensity(stem, slice.intensity());

                    std::vector<std::string> row{w->name, num(z)};
                    try
                    {
                        const BeamStats b = beam_profile_stats(slice);
                        for (double v : {b.peak_x, b.peak_y, b.peak_intensity, b.fwhm})
                            row.push_back(num(v));
                        row.push_back(std::to_string(b.ring_count));
                        row.push_back(num(b.on_axis_intensity));
                    }
                    catch (const NoBeamError &)
                    {
                        row.insert(row.end(), 6, "nan");
                    }
                    stats.push_back(std::move(row));
                }
            }
            ctx.out.emit("slice_stats.csv", csv_table({"wavefront", "z_m", "peak_x_m", "peak_y_m", "peak_intensity",
                                                       "fwhm_m", "ring_count", "on_axis_intensity"},
                                                      stats));
        }

        void run_gain_curve(StageContext &ctx, const GainCurveStage &stage)
        {
            std::vector<WavefrontSpec> specs;
            for (const NamedWavefront *w : select(ctx.config, stage.wavefronts))
                specs.push_back(w->spec);
            const GainCurve curve = gain_curve(ctx.grid, specs, stage.distances);

            std::vector<std::string> header{"z_m"};
            header.insert(header.end(), curve.labels.begin(), curve.labels.end());
            std::vector<std::vector<std::string>> rows;
            for (std::size_t i = 0; i < curve.distances.size(); ++i)
            {
                std::vector<std::string> row{num(curve.distances[i])};
                for (const auto &g : curve.gain)
                    row.push_back(num(g[i]));
                rows.push_back(std::move(row));
            }
            ctx.out.emit("gain_curve.csv", csv_table(header, rows));

            std::vector<std::vector<std::string>> summary;
            if (curve.bessel_peak)
                summary.push_back({"bessel_peak_m", num(*curve.bessel_peak)});
            if (curve.focal_length)
                summary.push_back({"focal_length_m", num(*curve.focal_length)});
            for (std::size_t w = 0; w < curve.labels.size(); ++w)
            {
                const auto &g = curve.gain[w];
                const std::size_t i = static_cast<std::size_t>(std::max_element(g.begin(), g.end()) - g.begin());
                summary.push_back({"peak_z_m_" + curve.labels[w], num(curve.distances[i])});
                summary.push_back({"peak_gain_" + curve.labels[w], num(g[i])});
            }
            ctx.out.emit("gain_summary.csv", csv_table({"quantity", "value"}, summary));
        }

        // Intensity cosine of two independent circular complex Gaussian speckle
        // fields over the same receiver window, averaged over a few draws.
        double noise_baseline(const PlaneSampling &s, std::optional<double> rx_radius, std::uint64_t seed)
        {
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> normal(0.0, 1.0);
            constexpr int kDraws = 4;
            double acc = 0.0;
            for (int d = 0; d < kDraws; ++d)
            {
                FieldSlice a, b;
                a.sampling = b.sampling = s;
                a.samples = Array2D<Complex>(s.rows, s.cols);
                b.samples = Array2D<Complex>(s.rows, s.cols);
                for (auto &v : a.samples)
                    v = Complex(normal(rng), normal(rng));
                for (auto &v : b.samples)
                    v = Complex(normal(rng), normal(rng));
                acc += rx_radius ? self_healing_correlation(a, b, *rx_radius) : self_healing_correlation(a, b);
            }
            return acc / kDraws;
        }

        void run_blockage(StageContext &ctx, const BlockageStage &stage)
        {
            const double wavelength = ctx.grid.wavelength();
            std::vector<std::vector<std::string>> slices, summary;
            for (std::size_t oi = 0; oi < ctx.config.obstacles.size(); ++oi)
            {
                const NamedObstacle &obs = ctx.config.obstacles[oi];

                // Bessel geometry drives the automatic evaluation plane and receiver.
                std::optional<AxiconDesign> axicon;
                for (const auto &name : obs.wavefronts)
                {
                    const WavefrontSpec &spec = ctx.config.wavefront(name).spec;
                    if (spec.kind == WavefrontKind::bessel)
                    {
                        axicon = axicon_design(ctx.grid, spec.spot_size, spec.spot_convention);
                        break;
                    }
                }
                double eval_z = 0.0;
                if (obs.eval_z)
                    eval_z = *obs.eval_z;
                else
                {
                    const double shadow = 0.5 * obs.spec.size / std::tan(axicon->cone_angle);
                    eval_z = obs.spec.plane_z + 2.0 * shadow;
                }
                std::optional<double> rx = obs.rx_radius;
                if (!rx && obs.rx_radius_auto && axicon)
                    rx = j0_zero(1) / axicon->radial_wavenumber;

                std::vector<double> planes;
                for (double z : stage.slice_z)
                    if (z > 0.0)
                        planes.push_back(z);
                planes.push_back(eval_z);
                std::sort(planes.begin(), planes.end());
                planes.erase(std::unique(planes.begin(), planes.end()), planes.end());

                std::optional<double> baseline;
                for (const std::string &wname : obs.wavefronts)
                {
                    WavefrontSpec spec = ctx.config.wavefront(wname).spec;
                    if (spec.kind == WavefrontKind::focusing && !spec.focal_length)
                        spec.focal_length = eval_z;
                    const ApertureField field = synthesize(ctx.grid, spec).field;

                    const AngularSpectrum free(field, ctx.config.plan);
                    const PlaneSampling &s = free.sampling();
                    if (!baseline)
                        baseline = noise_baseline(s, rx, ctx.config.seed + oi);
                    FieldSlice masked = free.at(obs.spec.plane_z);
                    const AmplitudeMask mask = make_obstacle_mask(s, obs.spec);
                    for (std::size_t j = 0; j < masked.samples.size(); ++j)
                        masked.samples.values()[j] *= mask.values().values()[j];
                    const AngularSpectrum blocked_src(masked, wavelength, ctx.config.plan);

                    // y = 0 row (or the row just below the axis for even windows).
                    const auto axis_row = static_cast<std::size_t>(std::floor(-s.origin_y / s.pitch + 1e-9));
                    Array2D<double> side(planes.size(), s.cols);

                    for (std::size_t pi = 0; pi < planes.size(); ++pi)
                    {
                        const double z = planes[pi];
                        const FieldSlice f = free.at(z);
                        const FieldSlice b = z < obs.spec.plane_z ? f
                                             : z == obs.spec.plane_z ? masked
                                                                     : blocked_src.at(z);
                        const double corr =
                            rx ? self_healing_correlation(b, f, *rx) : self_healing_correlation(b, f);
                        const Array2D<double> ib = b.intensity(), iff = f.intensity();
                        const double peak_b = *std::max_element(ib.begin(), ib.end());
                        const double peak_f = *std::max_element(iff.begin(), iff.end());
                        const std::size_t arg_b = static_cast<std::size_t>(std::max_element(ib.begin(), ib.end()) - ib.begin());
                        const double peak_bx = s.x(arg_b % s.cols);
                        for (std::size_t c = 0; c < s.cols; ++c)
                            side(pi, c) = ib(axis_row, c);

                        slices.push_back({obs.name, wname, num(z), num(corr), num(peak_f), num(peak_b), num(peak_bx)});
                        if (z == eval_z)
                        {
                            summary.push_back({obs.name, wname, num(obs.spec.plane_z), num(z),
                                               rx ? num(*rx) : std::string("inf"), num(corr), num(peak_f),
                                               num(peak_b), num(peak_bx), num(*baseline)});
                            ctx.emit_intensity("free_" + obs.name + "_" + wname, iff);
                            ctx.emit_intensity("blocked_" + obs.name + "_" + wname, ib);
                        }
                    }
                    // Side view: columns are x, z grows upwards in the image.
                    ctx.emit_intensity("sideview_" + obs.name + "_" + wname, side);
                }
            }
            ctx.out.emit("blockage_slices.csv",
                         csv_table({"obstacle", "wavefront", "z_m", "correlation", "free_peak", "blocked_peak",
                                    "blocked_peak_x_m"},
                                   slices));
            ctx.out.emit("blockage_summary.csv",
                         csv_table({"obstacle", "wavefront", "obstacle_z_m", "eval_z_m", "rx_radius_m", "correlation",
                                    "free_peak", "blocked_peak", "blocked_peak_x_m", "noise_baseline"},
                                   summary));
        }

        void run_crosstalk(StageContext &ctx, const CrosstalkStage &stage)
        {
            const WavefrontSpec &base = ctx.config.wavefront(stage.base).spec;
            const double rx = stage.rx_radius.value_or(ctx.grid.half_side());
            const CrosstalkMatrix m =
                crosstalk_matrix(ctx.grid, base, stage.modes, stage.z, stage.steer_angle, rx, ctx.config.plan);
            std::vector<std::vector<std::string>> rows;
            for (std::size_t tx = 0; tx < m.modes.size(); ++tx)
                for (std::size_t r = 0; r < m.modes.size(); ++r)
                    rows.push_back({std::to_string(m.modes[tx]), std::to_string(m.modes[r]),
                                    num(m.power_coupling_db(r, tx))});
            ctx.out.emit("crosstalk.csv", csv_table({"tx_mode", "rx_mode", "coupling_db"}, rows));

            if (!stage.spillover_angles.empty())
            {
                const auto sp = steering_spillover(ctx.grid, base, stage.spillover_mode, stage.spillover_angles,
                                                   stage.z, rx, ctx.config.plan);
                std::vector<std::vector<std::string>> srows;
                for (const auto &p : sp)
                    srows.push_back({num(rad_to_deg(p.steer_angle)), num(p.neighbour_power_db)});
                ctx.out.emit("spillover.csv", csv_table({"steer_angle_deg", "spillover_db"}, srows));
            }
        }

        void run_capacity(StageContext &ctx, const CapacityStage &stage)
        {
            std::vector<std::vector<std::string>> rows;
            for (const BandwidthRow &r : bandwidth_table(stage.target_rate, stage.mode_counts, stage.qam_orders))
                rows.push_back({std::to_string(r.n_modes), std::to_string(r.qam_order), num(r.bandwidth)});
            ctx.out.emit("bandwidth.csv", csv_table({"n_modes", "qam_order", "bandwidth_hz"}, rows));
        }

        // ---- INI emission --------------------------------------------------------

        std::string join_numbers(const std::vector<double> &v)
        {
            std::string s;
            for (double d : v)
                s += (s.empty() ? "" : " ") + exact(d);
            return s;
        }

        template <typename Int>
        std::string join_ints(const std::vector<Int> &v)
        {
            std::string s;
            for (auto i : v)
                s += (s.empty() ? "" : " ") + std::to_string(i);
            return s;
        }

        std::string join_names(const std::vector<std::string> &v)
        {
            std::string s;
            for (const auto &n : v)
                s += (s.empty() ? "" : " ") + n;
            return s;
        }

        // Empty list means "all wavefronts" and is written by omission.
        std::string names_line(const std::vector<std::string> &v)
        {
            return v.empty() ? std::string() : "wavefronts = " + join_names(v) + "\n";
        }
    } // namespace

    std::string_view toolkit_version() noexcept { return THZWAVE_VERSION; }

    std::string_view to_string(Stage stage) noexcept { return enum_name(stage, kStages); }

    // ---- ScenarioConfig -------------------------------------------------------

    const NamedWavefront &ScenarioConfig::wavefront(const std::string &name) const
    {
        for (const auto &w : wavefronts)
            if (w.name == name)
                return w;
        throw ConfigError("wavefronts", "no wavefront named '" + name + "'");
    }

    void ScenarioConfig::validate() const
    {
        try
        {
            (void)make_grid(grid.side_length, grid.frequency, grid.pitch_fraction);
        }
        catch (const InvalidArgument &e)
        {
            throw ConfigError("grid", e.what());
        }
        if (plan.pad_factor < 1 || plan.pad_factor > 8)
            throw ConfigError("propagation.pad_factor", "must lie in [1, 8]");

        const bool any_stage = synthesize || propagate || gain_curve || blockage || crosstalk || capacity;
        if (!any_stage)
            throw ConfigError("scenario", "no stage section ([synthesize], [propagate], [gain_curve], [blockage], "
                                          "[crosstalk] or [capacity]) is present");
        const bool needs_wavefronts = synthesize || propagate || gain_curve || blockage || crosstalk;
        if (needs_wavefronts && wavefronts.empty())
            throw ConfigError("wavefronts", "at least one [wavefront.NAME] section is required");

        std::set<std::string> names;
        for (const auto &w : wavefronts)
        {
            if (!valid_name(w.name))
                throw ConfigError("wavefront." + w.name, "names may use letters, digits, '_' and '-'");
            if (!names.insert(w.name).second)
                throw ConfigError("wavefront." + w.name, "duplicate wavefront name");
        }
        auto check_refs = [&](const std::string &path, const std::vector<std::string> &refs) {
            for (const auto &r : refs)
                if (!names.count(r))
                    throw ConfigError(path, "unknown wavefront '" + r + "'");
        };
        auto check_sorted = [](const std::string &path, const std::vector<double> &v) {
            if (v.empty())
                throw ConfigError(path, "at least one distance is required");
            for (std::size_t i = 0; i < v.size(); ++i)
                if (!(v[i] > 0.0) || (i > 0 && !(v[i] > v[i - 1])))
                    throw ConfigError(path, "distances must be positive and strictly increasing");
        };

        if (synthesize)
            check_refs("synthesize.wavefronts", synthesize->wavefronts);
        if (propagate)
        {
            check_refs("propagate.wavefronts", propagate->wavefronts);
            check_sorted("propagate.z_values", propagate->z_values);
        }
        if (gain_curve)
        {
            check_refs("gain_curve.wavefronts", gain_curve->wavefronts);
            check_sorted("gain_curve.z_values", gain_curve->distances);
        }
        if (blockage)
        {
            if (obstacles.empty())
                throw ConfigError("obstacles", "blockage needs at least one [obstacle.NAME] section");
            for (const auto &o : obstacles)
            {
                const std::string path = "obstacle." + o.name;
                if (o.wavefronts.empty())
                    throw ConfigError(path + ".wavefronts", "list at least one wavefront");
                check_refs(path + ".wavefronts", o.wavefronts);
                const bool has_bessel = std::any_of(o.wavefronts.begin(), o.wavefronts.end(), [&](const auto &n) {
                    return wavefront(n).spec.kind == WavefrontKind::bessel;
                });
                if (!o.eval_z && (o.spec.shape == ObstacleShape::half_plane || !has_bessel))
                    throw ConfigError(path + ".eval_z", "automatic evaluation plane needs a Bessel wavefront and a "
                                                        "finite obstacle; give eval_z explicitly");
                if (o.eval_z && !(*o.eval_z > o.spec.plane_z))
                    throw ConfigError(path + ".eval_z", "evaluation plane must lie beyond the obstacle");
            }
        }
        if (crosstalk)
        {
            if (!names.count(crosstalk->base))
                throw ConfigError("crosstalk.base", "unknown wavefront '" + crosstalk->base + "'");
            if (crosstalk->modes.empty() ||
                std::set<int>(crosstalk->modes.begin(), crosstalk->modes.end()).size() != crosstalk->modes.size())
                throw ConfigError("crosstalk.modes", "list distinct mode indices");
            if (!(crosstalk->z > 0.0))
                throw ConfigError("crosstalk.z", "must be positive");
        }
        if (capacity)
        {
            if (capacity->mode_counts.empty())
                throw ConfigError("capacity.mode_counts", "list at least one mode count");
            if (capacity->qam_orders.empty())
                throw ConfigError("capacity.qam_orders", "list at least one QAM order");
            try
            {
                for (auto m : capacity->mode_counts)
                    for (auto q : capacity->qam_orders)
                        LinkBudgetSpec{capacity->target_rate, m, q}.validate();
            }
            catch (const InvalidArgument &e)
            {
                throw ConfigError("capacity", e.what());
            }
        }
        if (output.directory.empty())
            throw ConfigError("output.directory", "must not be empty");
        if (!(output.db_floor < 0.0))
            throw ConfigError("output.db_floor", "must be negative");
    }

    // ---- parsing ----------------------------------------------------------------

    ScenarioConfig parse_scenario(std::string_view ini_text)
    {
        pt::ptree tree;
        std::istringstream in{std::string(ini_text)};
        try
        {
            pt::read_ini(in, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
        }

        // The INI reader drops sections without keys; "[synthesize]" alone is
        // meaningful, so headers are collected separately.
        std::vector<std::pair<std::string, pt::ptree>> sections;
        for (const auto &[name, child] : tree)
        {
            if (child.empty() && !child.data().empty())
                throw ConfigError(name, "key outside a section");
            sections.emplace_back(name, child);
        }
        {
            std::istringstream lines{std::string(ini_text)};
            std::string line;
            while (std::getline(lines, line))
            {
                const std::string t = trim(line);
                if (t.size() > 2 && t.front() == '[' && t.back() == ']')
                {
                    const std::string name = trim(std::string_view(t).substr(1, t.size() - 2));
                    if (tree.find(name) == tree.not_found())
                        sections.emplace_back(name, pt::ptree());
                }
            }
        }

        ScenarioConfig c;
        for (const auto &[name, child] : sections)
        {
            Section sec(name, child);
            const auto dot = name.find('.');
            const std::string head = name.substr(0, dot);
            const std::string tail = dot == std::string::npos ? std::string() : name.substr(dot + 1);

            if (head == "wavefront" && !tail.empty())
                c.wavefronts.push_back(parse_wavefront(tail, sec));
            else if (head == "obstacle" && !tail.empty())
                c.obstacles.push_back(parse_obstacle(tail, sec));
            else if (!tail.empty())
                throw ConfigError(name, "unknown section");
            else if (name == "scenario")
            {
                if (auto v = sec.text("name"))
                    c.name = *v;
                if (auto v = sec.integer("seed"))
                {
                    if (*v < 0)
                        throw ConfigError("scenario.seed", "must be non-negative");
                    c.seed = static_cast<std::uint64_t>(*v);
                }
                sec.finish();
            }
            else if (name == "grid")
            {
                c.grid.side_length = sec.required_number("side_length");
                c.grid.frequency = sec.required_number("frequency");
                c.grid.pitch_fraction = sec.number("pitch_fraction", 0.5);
                sec.finish();
            }
            else if (name == "propagation")
            {
                if (auto v = sec.integer("pad_factor"))
                    c.plan.pad_factor = static_cast<int>(*v);
                c.plan.band_limit = sec.boolean("band_limit").value_or(true);
                c.plan.evanescent_cutoff = sec.boolean("evanescent_cutoff").value_or(true);
                sec.finish();
            }
            else if (name == "synthesize")
            {
                c.synthesize = SynthesizeStage{sec.names("wavefronts")};
                sec.finish();
            }
            else if (name == "propagate")
            {
                PropagateStage p;
                p.wavefronts = sec.names("wavefronts");
                p.z_values = sec.sweep("z").value_or(std::vector<double>{});
                const std::string method = sec.text("method").value_or("angular_spectrum");
                if (method != "angular_spectrum" && method != "direct_sum")
                    throw ConfigError("propagate.method", "must be angular_spectrum or direct_sum");
                p.direct = method == "direct_sum";
                p.crop_to_aperture = sec.boolean("crop_to_aperture").value_or(true);
                sec.finish();
                c.propagate = std::move(p);
            }
            else if (name == "gain_curve")
            {
                GainCurveStage g;
                g.wavefronts = sec.names("wavefronts");
                g.distances = sec.sweep("z").value_or(std::vector<double>{});
                sec.finish();
                c.gain_curve = std::move(g);
            }
            else if (name == "blockage")
            {
                c.blockage = BlockageStage{sec.sweep("slice_z").value_or(std::vector<double>{})};
                sec.finish();
            }
            else if (name == "crosstalk")
            {
                CrosstalkStage x;
                x.base = sec.required_text("base");
                for (auto m : sec.integers("modes").value_or(std::vector<std::int64_t>{}))
                    x.modes.push_back(static_cast<int>(m));
                x.z = sec.required_number("z");
                bool present = false;
                x.rx_radius = sec.number_or_auto("rx_radius", present);
                x.steer_angle = deg_to_rad(sec.number("steer_angle_deg", 0.0));
                for (double a : sec.numbers("spillover_angles_deg").value_or(std::vector<double>{}))
                    x.spillover_angles.push_back(deg_to_rad(a));
                x.spillover_mode = static_cast<int>(sec.integer("spillover_mode").value_or(1));
                sec.finish();
                c.crosstalk = std::move(x);
            }
            else if (name == "capacity")
            {
                CapacityStage cap;
                cap.target_rate = sec.required_number("target_rate");
                cap.mode_counts = sec.integers("mode_counts").value_or(std::vector<std::int64_t>{});
                cap.qam_orders = sec.integers("qam_orders").value_or(std::vector<std::int64_t>{});
                sec.finish();
                c.capacity = std::move(cap);
            }
            else if (name == "output")
            {
                if (auto v = sec.text("directory"))
                    c.output.directory = *v;
                c.output.csv = sec.boolean("csv").value_or(true);
                const std::string image = sec.text("image").value_or("none");
                if (image == "png")
                    c.output.image = ImageFormat::png;
                else if (image == "pgm")
                    c.output.image = ImageFormat::pgm;
                else if (image != "none")
                    throw ConfigError("output.image", "must be png, pgm or none");
                c.output.scale = parse_enum(sec, "scale", kScales, IntensityScale::db);
                c.output.db_floor = sec.number("db_floor", -60.0);
                sec.finish();
            }
            else
                throw ConfigError(name, "unknown section");
        }
        c.validate();
        return c;
    }

    ScenarioConfig load_scenario(const std::filesystem::path &path)
    {
        return parse_scenario(read_file(path));
    }

    std::string to_ini(const ScenarioConfig &c)
    {
        std::ostringstream o;
        o << "[scenario]\nname = " << c.name << "\nseed = " << c.seed << "\n\n";
        o << "[grid]\nside_length = " << exact(c.grid.side_length) << "\nfrequency = " << exact(c.grid.frequency)
          << "\npitch_fraction = " << exact(c.grid.pitch_fraction) << "\n\n";
        o << "[propagation]\npad_factor = " << c.plan.pad_factor
          << "\nband_limit = " << (c.plan.band_limit ? "true" : "false")
          << "\nevanescent_cutoff = " << (c.plan.evanescent_cutoff ? "true" : "false") << "\n\n";

        for (const auto &w : c.wavefronts)
        {
            const WavefrontSpec &s = w.spec;
            o << "[wavefront." << w.name << "]\nkind = " << enum_name(s.kind, kKinds) << "\n";
            if (s.steer.x != 0.0 || s.steer.y != 0.0)
                o << "steer_theta_deg = " << exact(rad_to_deg(std::acos(s.steer.z)))
                  << "\nsteer_phi_deg = " << exact(rad_to_deg(std::atan2(s.steer.y, s.steer.x))) << "\n";
            if (s.kind == WavefrontKind::focusing)
                o << "focal_length = " << (s.focal_length ? exact(*s.focal_length) : std::string("auto")) << "\n";
            else if (s.focal_length)
                o << "focal_length = " << exact(*s.focal_length) << "\n";
            if (s.kind == WavefrontKind::bessel || s.spot_size != 0.0)
                o << "spot_size = " << exact(s.spot_size)
                  << "\nspot_convention = " << enum_name(s.spot_convention, kConventions) << "\n";
            if (!s.caustic_coefficients.empty())
                o << "caustic_coefficients = " << join_numbers(s.caustic_coefficients) << "\n";
            if (s.caustic_z_end != 0.0)
                o << "caustic_z_end = " << exact(s.caustic_z_end) << "\n";
            if (s.oam_mode != 0)
                o << "oam_mode = " << s.oam_mode << "\n";
            o << "aperture = " << enum_name(s.aperture, kShapes) << "\n";
            if (s.taper_waist)
                o << "taper_waist = " << exact(*s.taper_waist) << "\n";
            if (s.quantize_bits != 0)
                o << "quantize_bits = " << s.quantize_bits << "\n";
            o << "\n";
        }
        for (const auto &ob : c.obstacles)
        {
            o << "[obstacle." << ob.name << "]\nshape = " << enum_name(ob.spec.shape, kObstacles)
              << "\nsize = " << exact(ob.spec.size) << "\ncenter_x = " << exact(ob.spec.center_x)
              << "\ncenter_y = " << exact(ob.spec.center_y) << "\nplane_z = " << exact(ob.spec.plane_z)
              << "\nwavefronts = " << join_names(ob.wavefronts)
              << "\neval_z = " << (ob.eval_z ? exact(*ob.eval_z) : std::string("auto")) << "\nrx_radius = "
              << (ob.rx_radius ? exact(*ob.rx_radius) : std::string(ob.rx_radius_auto ? "auto" : "none"))
              << "\n\n";
        }
        if (c.synthesize)
            o << "[synthesize]\n" << names_line(c.synthesize->wavefronts) << "\n";
        if (c.propagate)
            o << "[propagate]\n" << names_line(c.propagate->wavefronts) << "z_values = " << join_numbers(c.propagate->z_values)
              << "\nmethod = " << (c.propagate->direct ? "direct_sum" : "angular_spectrum")
              << "\ncrop_to_aperture = " << (c.propagate->crop_to_aperture ? "true" : "false") << "\n\n";
        if (c.gain_curve)
            o << "[gain_curve]\n" << names_line(c.gain_curve->wavefronts) << "z_values = " << join_numbers(c.gain_curve->distances) << "\n\n";
        if (c.blockage)
            o << "[blockage]\nslice_z_values = " << join_numbers(c.blockage->slice_z) << "\n\n";
        if (c.crosstalk)
        {
            const CrosstalkStage &x = *c.crosstalk;
            std::vector<double> deg;
            for (double a : x.spillover_angles)
                deg.push_back(rad_to_deg(a));
            o << "[crosstalk]\nbase = " << x.base << "\nmodes = " << join_ints(x.modes) << "\nz = " << exact(x.z)
              << "\nrx_radius = " << (x.rx_radius ? exact(*x.rx_radius) : std::string("auto"))
              << "\nsteer_angle_deg = " << exact(rad_to_deg(x.steer_angle))
              << "\nspillover_angles_deg = " << join_numbers(deg) << "\nspillover_mode = " << x.spillover_mode
              << "\n\n";
        }
        if (c.capacity)
            o << "[capacity]\ntarget_rate = " << exact(c.capacity->target_rate)
              << "\nmode_counts = " << join_ints(c.capacity->mode_counts)
              << "\nqam_orders = " << join_ints(c.capacity->qam_orders) << "\n\n";
        o << "[output]\ndirectory = " << c.output.directory << "\ncsv = " << (c.output.csv ? "true" : "false")
          << "\nimage = "
          << (c.output.image ? (*c.output.image == ImageFormat::png ? "png" : "pgm") : "none")
          << "\nscale = " << enum_name(c.output.scale, kScales) << "\ndb_floor = " << exact(c.output.db_floor)
          << "\n";
        return o.str();
    }

    // ---- presets -------------------------------------------------------------------

    std::vector<std::string> preset_names() { return {"fig3", "fig3-ci", "fig4", "fig4-ci", "fig5", "oam", "oam-ci"}; }

    ScenarioConfig preset(std::string_view name)
    {
        auto wavefront = [](std::string n, WavefrontKind kind) {
            NamedWavefront w;
            w.name = n;
            w.spec.label = std::move(n);
            w.spec.kind = kind;
            return w;
        };
        auto bessel = [&](double spot) {
            NamedWavefront w = wavefront("bessel", WavefrontKind::bessel);
            w.spec.spot_size = spot;
            w.spec.aperture = ApertureShape::circular;
            return w;
        };

        ScenarioConfig c;
        c.name = std::string(name);
        c.output.directory = "out/" + std::string(name);
        c.output.image = ImageFormat::png;

        // CI variants keep every Fresnel number of the full-scale run:
        // transverse lengths x0.2, wavelength x10/3, distances x0.012.
        const bool ci = name.ends_with("-ci");
        const double t = ci ? 0.2 : 1.0;
        const double zs = ci ? 0.012 : 1.0;
        auto across = [&](double v) { return tidy(v * t); };
        auto along = [&](double v) { return tidy(v * zs); };
        if (ci)
            c.grid = GridConfig{0.05, 3e11, 0.5};

        if (name == "fig3" || name == "fig3-ci")
        {
            c.wavefronts = {wavefront("beamforming", WavefrontKind::planar),
                            wavefront("beamfocusing", WavefrontKind::focusing), bessel(across(0.02))};
            c.gain_curve = GainCurveStage{{}, linear_range(along(1.0), along(30.0), along(0.5))};
            if (ci)
                c.synthesize = SynthesizeStage{{"beamforming", "bessel"}};
            return c;
        }
        if (name == "fig4" || name == "fig4-ci")
        {
            const double r = 0.5 * c.grid.side_length;
            NamedWavefront caustic = wavefront("caustic", WavefrontKind::caustic);
            // Parabolic caustic bending towards -x: x_c(z) = -R - a z^2.
            caustic.spec.caustic_coefficients = {-r, 0.0, ci ? -2.4 : -0.001728};
            caustic.spec.caustic_z_end = ci ? 0.2 : 16.0;
            c.wavefronts = {wavefront("beamforming", WavefrontKind::planar),
                            wavefront("beamfocusing", WavefrontKind::focusing), bessel(across(0.02)), caustic};

            NamedObstacle disc;
            disc.name = "disc";
            disc.spec = ObstacleSpec{ObstacleShape::disc, tidy(0.1 * c.grid.side_length), 0.0, 0.0, along(3.0)};
            disc.wavefronts = {"beamforming", "beamfocusing", "bessel"};
            NamedObstacle edge;
            edge.name = "edge";
            edge.spec = ObstacleSpec{ObstacleShape::half_plane, 0.0, -r, 0.0, ci ? 0.075 : 6.25};
            edge.wavefronts = {"beamforming", "caustic"};
            edge.eval_z = ci ? 0.15 : 12.5;
            edge.rx_radius_auto = false;
            c.obstacles = {disc, edge};
            c.blockage = BlockageStage{linear_range(along(0.5), along(15.0), along(0.5))};
            c.plan.pad_factor = ci ? 4 : 2;
            return c;
        }
        if (name == "fig5")
        {
            c.capacity = CapacityStage{1e12, {1, 2, 4, 8, 16, 32}, {4, 16, 64, 256, 1024}};
            c.output.image.reset();
            return c;
        }
        if (name == "oam" || name == "oam-ci")
        {
            c.wavefronts = {bessel(across(0.02))};
            CrosstalkStage x;
            x.base = "bessel";
            x.modes = {0, 1, 2};
            // Full scale stays at 0.1 m: at 1 m a 2 degree tilt walks the beam
            // 35 mm off axis, past the 20 mm central lobe.
            x.z = ci ? 0.012 : 0.1;
            // Small receiver: the 2 degree tilt phase k sin(theta) a stays near 1 rad
            // across it, so the projections do not wrap.
            x.rx_radius = ci ? 0.005 : 0.0015;
            for (int i = 0; i <= 8; ++i)
                x.spillover_angles.push_back(deg_to_rad(0.25 * i));
            c.crosstalk = std::move(x);
            c.output.image.reset();
            return c;
        }
        throw InvalidArgument("unknown preset '" + std::string(name) + "'");
    }

    // ---- run -------------------------------------------------------------------------

    std::string RunManifest::to_json() const
    {
        nlohmann::ordered_json j;
        j["scenario"] = scenario;
        j["toolkit_version"] = toolkit_version;
        j["config_sha256"] = config_digest;
        j["artifacts"] = nlohmann::ordered_json::array();
        for (const auto &a : artifacts)
            j["artifacts"].push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
        j["stages"] = nlohmann::ordered_json::array();
        for (const auto &t : timings)
            j["stages"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
        return j.dump(2) + "\n";
    }

    RunManifest run_scenario(const ScenarioConfig &config, const RunOptions &options)
    {
        config.validate();
        const std::filesystem::path root = options.output_directory.value_or(config.output.directory);
        std::error_code ec;
        std::filesystem::create_directories(root, ec);
        if (ec || !std::filesystem::is_directory(root))
            throw IoError("cannot create output directory " + root.string());

        ArtifactWriter writer(root);
        StageContext ctx{config,
                         options,
                         writer,
                         make_grid(config.grid.side_length, config.grid.frequency, config.grid.pitch_fraction),
                         config.output.csv,
                         options.csv_only ? std::nullopt : (options.image_format ? options.image_format
                                                                                 : config.output.image),
                         config.output.scale,
                         options.db_floor.value_or(config.output.db_floor)};
        if (!(ctx.db_floor < 0.0))
            throw ConfigError("output.db_floor", "must be negative");

        RunManifest manifest;
        manifest.scenario = config.name;
        manifest.toolkit_version = std::string(toolkit_version());
        manifest.config_digest = sha256_hex(to_ini(config));

        auto stage = [&](Stage s, bool present, auto &&fn) {
            if (!present || (options.only && *options.only != s))
                return;
            const auto t0 = std::chrono::steady_clock::now();
            fn();
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            manifest.timings.push_back({std::string(to_string(s)), dt.count()});
        };
        if (options.only)
        {
            const bool present = (*options.only == Stage::synthesize && config.synthesize) ||
                                 (*options.only == Stage::propagate && config.propagate) ||
                                 (*options.only == Stage::gain_curve && config.gain_curve) ||
                                 (*options.only == Stage::blockage && config.blockage) ||
                                 (*options.only == Stage::crosstalk && config.crosstalk) ||
                                 (*options.only == Stage::capacity && config.capacity);
            if (!present)
                throw ConfigError(std::string(to_string(*options.only)), "section is not present in the scenario");
        }
        stage(Stage::synthesize, config.synthesize.has_value(), [&] { run_synthesize(ctx, *config.synthesize); });
        stage(Stage::propagate, config.propagate.has_value(), [&] { run_propagate(ctx, *config.propagate); });
        stage(Stage::gain_curve, config.gain_curve.has_value(), [&] { run_gain_curve(ctx, *config.gain_curve); });
        stage(Stage::blockage, config.blockage.has_value(), [&] { run_blockage(ctx, *config.blockage); });
        stage(Stage::crosstalk, config.crosstalk.has_value(), [&] { run_crosstalk(ctx, *config.crosstalk); });
        stage(Stage::capacity, config.capacity.has_value(), [&] { run_capacity(ctx, *config.capacity); });

        manifest.artifacts = writer.take();
        write_file(root / "manifest.json", manifest.to_json());
        return manifest;
    }

} // namespace thzwave
