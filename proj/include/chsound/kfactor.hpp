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

#ifndef CHSOUND_KFACTOR_HPP
#define CHSOUND_KFACTOR_HPP

#include "chsound/fft.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace chsound
{

struct SpectralMoments
{
    double g_a = 0.0; // mean of |H_i|^2
    double g_v = 0.0; // unbiased variance of |H_i|^2
};

struct KfEstimate
{
    double k_linear = 0.0; // may be +inf (no spectral variance)
    double k_db = 0.0;     // +inf for k_linear = inf, -inf for the Rayleigh clamp
    std::size_t n_samples = 0;
};

struct CdfPoint
{
    double value_db = 0.0;
    double empirical = 0.0;
    double fitted = 0.0;
};

struct NormalFit
{
    double mu = 0.0;
    double sigma = 0.0;              // population convention
    double max_cdf_deviation = 0.0;  // sup |F_emp - F_fit| over the sample points
    std::size_t n_used = 0;
    std::size_t n_pos_infinite = 0;  // excluded +inf entries
    std::size_t n_neg_infinite = 0;  // excluded -inf entries (Rayleigh clamps)
    std::vector<CdfPoint> cdf;       // sorted by value
};

SpectralMoments moments(std::span<const cplx> spectrum);

KfEstimate estimate_kf(std::span<const cplx> spectrum);

NormalFit fit_normal(std::span<const double> values_db);

double normal_cdf(double x, double mu, double sigma) noexcept;

} // namespace chsound

#endif
