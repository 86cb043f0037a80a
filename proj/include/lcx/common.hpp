// SPDX-License-Identifier: Apache-2.0
//
// lcxpin: simulation and optimization toolkit for leaky-coaxial-cable
// pinching-antenna downlinks
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

#ifndef LCX_COMMON_HPP
#define LCX_COMMON_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcx
{
    using cplx = std::complex<double>;
    using Vec3 = Eigen::Vector3d;

    inline constexpr double speed_of_light = 299792458.0; // m/s

    inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
    inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

    /// Raised for invalid scenario or configuration input.
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    /// Dense row-major 2-D array with bounds-checked access in debug builds.
    template <typename T>
    class Array2
    {
    public:
        Array2() = default;
        Array2(std::size_t rows, std::size_t cols, T init = T{})
            : rows_(rows), cols_(cols), data_(rows * cols, init) {}

        T &operator()(std::size_t r, std::size_t c)
        {
            assert(r < rows_ && c < cols_);
            return data_[r * cols_ + c];
        }
        const T &operator()(std::size_t r, std::size_t c) const
        {
            assert(r < rows_ && c < cols_);
            return data_[r * cols_ + c];
        }

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }
        std::size_t size() const { return data_.size(); }
        const std::vector<T> &data() const { return data_; }
        void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

        bool operator==(const Array2 &) const = default;

    private:
        std::size_t rows_ = 0, cols_ = 0;
        std::vector<T> data_;
    };

    /// Dense 3-D array indexed as (k, m, n).
    template <typename T>
    class Array3
    {
    public:
        Array3() = default;
        Array3(std::size_t d0, std::size_t d1, std::size_t d2, T init = T{})
            : d0_(d0), d1_(d1), d2_(d2), data_(d0 * d1 * d2, init) {}

        T &operator()(std::size_t i, std::size_t j, std::size_t l)
        {
            assert(i < d0_ && j < d1_ && l < d2_);
            return data_[(i * d1_ + j) * d2_ + l];
        }
        const T &operator()(std::size_t i, std::size_t j, std::size_t l) const
        {
            assert(i < d0_ && j < d1_ && l < d2_);
            return data_[(i * d1_ + j) * d2_ + l];
        }

        std::size_t dim0() const { return d0_; }
        std::size_t dim1() const { return d1_; }
        std::size_t dim2() const { return d2_; }
        const std::vector<T> &data() const { return data_; }

        bool operator==(const Array3 &) const = default;

    private:
        std::size_t d0_ = 0, d1_ = 0, d2_ = 0;
        std::vector<T> data_;
    };
}

#endif
