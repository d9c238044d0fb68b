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

#include "chsound/kfactor.hpp"
#include "chsound/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chsound
{

SpectralMoments moments(std::span<const cplx> spectrum)
{
    const std::size_t count = spectrum.size();
    if (count < 2)
        throw Error(Errc::InsufficientSamples, "moment estimation needs at least two spectral samples");

    const double n = static_cast<double>(count);
    double sum2 = 0.0;
    for (const auto &h : spectrum)
        sum2 += std::norm(h);

    SpectralMoments m;
    m.g_a = sum2 / n;

    // (sum |H|^4 - I * G_a^2) / (I - 1), accumulated as centred squares.
    // A constant spectrum is special-cased: the rounded mean need not equal the samples.
    const double first = std::norm(spectrum.front());
    const bool constant = std::all_of(spectrum.begin(), spectrum.end(),
                                      [first](const cplx &h) { return std::norm(h) == first; });
    if (constant)
    {
        m.g_a = first;
        m.g_v = 0.0;
        return m;
    }
    double centred = 0.0;
    for (const auto &h : spectrum)
    {
        const double d = std::norm(h) - m.g_a;
        centred += d * d;
    }
    m.g_v = centred / (n - 1.0);
    return m;
}

KfEstimate estimate_kf(std::span<const cplx> spectrum)
{
    const auto m = moments(spectrum);

    KfEstimate out;
    out.n_samples = spectrum.size();

    constexpr double inf = std::numeric_limits<double>::infinity();
    const double disc = m.g_a * m.g_a - m.g_v;
    if (m.g_v <= 0.0)
    {
        out.k_linear = inf;
        out.k_db = inf;
    }
    else if (disc <= 0.0)
    {
        out.k_linear = 0.0;
        out.k_db = -inf;
    }
    else
    {
        const double root = std::sqrt(disc);
        if (root >= m.g_a)
        {
            out.k_linear = inf;
            out.k_db = inf;
        }
        else
        {
            out.k_linear = root / (m.g_a - root);
            out.k_db = 10.0 * std::log10(out.k_linear);
        }
    }
    return out;
}

double normal_cdf(double x, double mu, double sigma) noexcept
{
    if (sigma == 0.0)
        return x < mu ? 0.0 : 1.0;
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

NormalFit fit_normal(std::span<const double> values_db)
{
    NormalFit fit;
    std::vector<double> finite;
    finite.reserve(values_db.size());
    for (double v : values_db)
    {
        if (std::isfinite(v))
            finite.push_back(v);
        else if (v > 0.0)
            ++fit.n_pos_infinite;
        else if (v < 0.0)
            ++fit.n_neg_infinite;
    }
    if (finite.size() < 2)
        throw Error(Errc::InsufficientSamples, "normal fit needs at least two finite values");

    const double n = static_cast<double>(finite.size());
    double mean = 0.0;
    for (double v : finite)
        mean += v;
    mean /= n;
    double var = 0.0;
    if (std::all_of(finite.begin(), finite.end(), [&](double v) { return v == finite.front(); }))
        mean = finite.front();
    else
        for (double v : finite)
            var += (v - mean) * (v - mean);

    fit.mu = mean;
    fit.sigma = std::sqrt(var / n);
    fit.n_used = finite.size();

    // Kolmogorov-Smirnov distance, checked on both sides of every step of the empirical CDF.
    std::sort(finite.begin(), finite.end());
    for (std::size_t i = 0; i < finite.size(); ++i)
    {
        const double f = normal_cdf(finite[i], fit.mu, fit.sigma);
        const double upper = static_cast<double>(i + 1) / n;
        const double lower = static_cast<double>(i) / n;
        fit.max_cdf_deviation = std::max({fit.max_cdf_deviation, std::abs(upper - f), std::abs(f - lower)});
        fit.cdf.push_back({finite[i], upper, f});
    }
    return fit;
}

} // namespace chsound
