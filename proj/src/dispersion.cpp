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

#include "chsound/dispersion.hpp"
#include "chsound/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace chsound
{

namespace
{

DsResult weighted_spread(const std::vector<double> &delay_s, const std::vector<double> &weight)
{
    double sum_w = 0.0, sum_wt = 0.0;
    for (std::size_t i = 0; i < delay_s.size(); ++i)
    {
        sum_w += weight[i];
        sum_wt += weight[i] * delay_s[i];
    }
    if (!(sum_w > 0.0))
        throw Error(Errc::InvalidInput, "delay spread needs positive total power");

    DsResult out;
    out.n_mpcs = delay_s.size();
    out.mean_excess_delay_s = sum_wt / sum_w;

    // Central second moment; a single component gives exactly zero.
    double sum_wd2 = 0.0;
    for (std::size_t i = 0; i < delay_s.size(); ++i)
    {
        const double d = delay_s[i] - out.mean_excess_delay_s;
        sum_wd2 += weight[i] * d * d;
    }
    out.rms_ds_s = delay_s.size() == 1 ? 0.0 : std::sqrt(sum_wd2 / sum_w);
    return out;
}

} // namespace

DsResult delay_spread(const MpcList &mpcs)
{
    if (mpcs.components.empty())
        throw Error(Errc::EmptyMpcSet, "delay spread of an empty MPC list");

    std::vector<double> delay, weight;
    delay.reserve(mpcs.components.size());
    weight.reserve(mpcs.components.size());
    for (const auto &c : mpcs.components)
    {
        delay.push_back(c.delay_s);
        weight.push_back(from_db(c.power_db));
    }
    return weighted_spread(delay, weight);
}

DsResult delay_spread_bins(const Apdp &apdp, double min_power_db)
{
    std::vector<double> delay, weight;
    for (std::size_t i = 0; i < apdp.power_db.size(); ++i)
    {
        if (apdp.power_db[i] >= min_power_db)
        {
            delay.push_back(static_cast<double>(i) * apdp.delay_bin_s);
            weight.push_back(from_db(apdp.power_db[i]));
        }
    }
    if (delay.empty())
        throw Error(Errc::EmptyMpcSet, "no APDP bin reaches the requested power");
    return weighted_spread(delay, weight);
}

DsSummary aggregate_ds(std::span<const DsResult> results)
{
    if (results.empty())
        throw Error(Errc::InvalidInput, "no delay-spread results to aggregate");

    const double n = static_cast<double>(results.size());
    double mean = 0.0;
    for (const auto &r : results)
        mean += r.rms_ds_s * 1e9;
    mean /= n;
    const double first = results.front().rms_ds_s;
    if (std::all_of(results.begin(), results.end(), [first](const DsResult &r) { return r.rms_ds_s == first; }))
        return {first * 1e9, 0.0};

    double var = 0.0;
    for (const auto &r : results)
    {
        const double d = r.rms_ds_s * 1e9 - mean;
        var += d * d;
    }
    return {mean, std::sqrt(var / n)};
}

} // namespace chsound
