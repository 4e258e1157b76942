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

#ifndef THZWAVE_ARRAY2D_HPP
#define THZWAVE_ARRAY2D_HPP

#include <cassert>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace thzwave
{
    using Complex = std::complex<double>;

    /// Dense row-major 2-D array. Row index is y, column index is x.
    template <typename T>
    class Array2D
    {
    public:
        Array2D() = default;
        Array2D(std::size_t rows, std::size_t cols, const T &fill = T{})
            : rows_(rows), cols_(cols), data_(rows * cols, fill)
        {
        }

        std::size_t rows() const noexcept { return rows_; }
        std::size_t cols() const noexcept { return cols_; }
        std::size_t size() const noexcept { return data_.size(); }
        bool empty() const noexcept { return data_.empty(); }

        T &operator()(std::size_t row, std::size_t col)
        {
            assert(row < rows_ && col < cols_);
            return data_[row * cols_ + col];
        }
        const T &operator()(std::size_t row, std::size_t col) const
        {
            assert(row < rows_ && col < cols_);
            return data_[row * cols_ + col];
        }

        T *data() noexcept { return data_.data(); }
        const T *data() const noexcept { return data_.data(); }
        std::span<T> values() noexcept { return data_; }
        std::span<const T> values() const noexcept { return data_; }

        auto begin() noexcept { return data_.begin(); }
        auto end() noexcept { return data_.end(); }
        auto begin() const noexcept { return data_.begin(); }
        auto end() const noexcept { return data_.end(); }

        bool same_shape(const Array2D &other) const noexcept
        {
            return rows_ == other.rows_ && cols_ == other.cols_;
        }

        bool operator==(const Array2D &) const = default;

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<T> data_;
    };

} // namespace thzwave

#endif
