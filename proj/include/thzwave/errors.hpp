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

#ifndef THZWAVE_ERRORS_HPP
#define THZWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thzwave
{
    /// Bad input to an operation (non-positive length, shape mismatch, ...).
    class InvalidArgument : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    /// Base of all numerical failures: the inputs were well-formed but the
    /// requested physics cannot be realised on the given sampling.
    class NumericError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Axicon design would need a radial wavenumber at or above k.
    class EvanescentDesignError : public NumericError
    {
    public:
        using NumericError::NumericError;
    };

    /// Tangent construction failed for some aperture abscissa.
    class CausticDesignError : public NumericError
    {
    public:
        CausticDesignError(const std::string &what, double aperture_x)
            : NumericError(what), aperture_x_(aperture_x)
        {
        }
        double aperture_x() const noexcept { return aperture_x_; }

    private:
        double aperture_x_;
    };

    /// Band-limited transfer function keeps too few frequency bins.
    class SamplingError : public NumericError
    {
    public:
        SamplingError(const std::string &what, double pad_factor_hint)
            : NumericError(what), pad_factor_hint_(pad_factor_hint)
        {
        }
        double pad_factor_hint() const noexcept { return pad_factor_hint_; }

    private:
        double pad_factor_hint_;
    };

    /// Obstacle footprint does not fit the propagated plane.
    class GeometryError : public NumericError
    {
    public:
        using NumericError::NumericError;
    };

    /// Slice has no isolated intensity peak.
    class NoBeamError : public NumericError
    {
    public:
        using NumericError::NumericError;
    };

    /// Scenario configuration failed validation. key_path names the offending key.
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError(const std::string &key_path, const std::string &message)
            : std::runtime_error(key_path.empty() ? message : key_path + ": " + message), key_path_(key_path)
        {
        }
        const std::string &key_path() const noexcept { return key_path_; }

    private:
        std::string key_path_;
    };

    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

} // namespace thzwave

#endif
