// SPDX-License-Identifier: Apache-2.0
//
// chsound - channel sounder post-processing and channel statistics
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
#ifndef CHSOUND_TESTS_SUPPORT_HPP
#define CHSOUND_TESTS_SUPPORT_HPP

#include "chsound/fft.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace chsound::testing
{

// Textbook O(N^2) DFT, forward sign -1, unnormalized.
inline std::vector<cplx> naive_dft(const std::vector<cplx> &x, int sign = -1)
{
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        long double re = 0.0L, im = 0.0L;
        for (std::size_t t = 0; t < n; ++t)
        {
            const long double ang = sign * 2.0L * std::numbers::pi_v<long double> *
                                    static_cast<long double>((k * t) % n) / static_cast<long double>(n);
            re += x[t].real() * std::cos(ang) - x[t].imag() * std::sin(ang);
            im += x[t].real() * std::sin(ang) + x[t].imag() * std::cos(ang);
        }
        out[k] = cplx(static_cast<double>(re), static_cast<double>(im));
    }
    return out;
}

inline std::vector<cplx> random_complex(std::size_t n, std::mt19937_64 &rng, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    std::vector<cplx> v(n);
    for (auto &c : v)
        c = {g(rng), g(rng)};
    return v;
}

inline double max_abs_diff(const std::vector<cplx> &a, const std::vector<cplx> &b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<cplx> &a)
{
    double m = 0.0;
    for (const auto &c : a)
        m = std::max(m, std::abs(c));
    return m;
}

inline std::string slurp(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string &name)
{
    auto p = std::filesystem::temp_directory_path() / ("chsound_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace chsound::testing

#endif
