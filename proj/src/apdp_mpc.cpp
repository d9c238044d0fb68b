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

#include "chsound/apdp_mpc.hpp"
#include "chsound/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace chsound
{

double to_db(double linear_power) noexcept
{
    if (!(linear_power > 0.0))
        return min_power_db;
    return std::max(min_power_db, 10.0 * std::log10(linear_power));
}

double from_db(double power_db) noexcept
{
    return std::pow(10.0, power_db / 10.0);
}

std::pair<std::size_t, std::size_t> NoiseWindowSpec::bins(std::size_t n_bins) const
{
    if (!(start_fraction >= 0.0) || !(end_fraction <= 1.0) || !(start_fraction < end_fraction))
        throw Error(Errc::InvalidInput, "noise window fractions must satisfy 0 <= start < end <= 1");

    const auto first = static_cast<std::size_t>(std::floor(start_fraction * static_cast<double>(n_bins)));
    const auto last = static_cast<std::size_t>(std::floor(end_fraction * static_cast<double>(n_bins)));
    if (first >= last)
        throw Error(Errc::InvalidInput, "noise window contains no delay bins");
    return {first, last};
}

namespace
{

double median_db(std::vector<double> linear)
{
    const std::size_t n = linear.size();
    const std::size_t mid = n / 2;
    std::nth_element(linear.begin(), linear.begin() + static_cast<std::ptrdiff_t>(mid), linear.end());
    double med = linear[mid];
    if (n % 2 == 0)
    {
        const double below = *std::max_element(linear.begin(), linear.begin() + static_cast<std::ptrdiff_t>(mid));
        med = 0.5 * (med + below);
    }
    return to_db(med);
}

} // namespace

double cir_noise_floor_db(const Cir &cir, const NoiseWindowSpec &guard)
{
    if (cir.taps.empty())
        throw Error(Errc::InvalidInput, "empty CIR");

    const auto [first, last] = guard.bins(cir.taps.size());
    std::vector<double> window;
    window.reserve(last - first);
    for (std::size_t i = first; i < last; ++i)
        window.push_back(std::norm(cir.taps[i]));
    return median_db(std::move(window));
}

double cir_snr_db(const Cir &cir, const NoiseWindowSpec &guard)
{
    const double floor_db = cir_noise_floor_db(cir, guard);
    double peak = 0.0;
    for (const auto &t : cir.taps)
        peak = std::max(peak, std::norm(t));
    return to_db(peak) - floor_db;
}

std::vector<std::size_t> snr_gate_indices(std::span<const Cir> cirs, double min_snr_db, const NoiseWindowSpec &guard)
{
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < cirs.size(); ++i)
        if (cir_snr_db(cirs[i], guard) >= min_snr_db)
            kept.push_back(i);
    return kept;
}

std::vector<Cir> snr_gate(std::span<const Cir> cirs, double min_snr_db, const NoiseWindowSpec &guard)
{
    std::vector<Cir> out;
    for (auto i : snr_gate_indices(cirs, min_snr_db, guard))
        out.push_back(cirs[i]);
    if (out.empty())
        throw Error(Errc::AllSnapshotsRejected,
                    std::to_string(cirs.size()) + " CIR(s) offered, none reached " + std::to_string(min_snr_db) + " dB SNR");
    return out;
}

Apdp average_apdp(std::span<const Cir> cirs)
{
    if (cirs.empty())
        throw Error(Errc::InvalidInput, "no CIRs to average");

    const std::size_t n_bins = cirs.front().taps.size();
    const double delay_bin = cirs.front().delay_bin_s;
    if (n_bins == 0)
        throw Error(Errc::InvalidInput, "empty CIR");

    std::vector<double> acc(n_bins, 0.0);
    for (const auto &cir : cirs)
    {
        if (cir.taps.size() != n_bins)
            throw Error(Errc::InvalidInput, "CIRs have different lengths");
        if (std::abs(cir.delay_bin_s - delay_bin) > 1e-12 * std::abs(delay_bin))
            throw Error(Errc::InvalidInput, "CIRs have different delay bins");
        for (std::size_t i = 0; i < n_bins; ++i)
            acc[i] += std::norm(cir.taps[i]);
    }

    Apdp apdp;
    apdp.delay_bin_s = delay_bin;
    apdp.n_averaged = cirs.size();
    apdp.power_db.resize(n_bins);
    const double inv_n = 1.0 / static_cast<double>(cirs.size());
    for (std::size_t i = 0; i < n_bins; ++i)
        apdp.power_db[i] = to_db(acc[i] * inv_n);
    return apdp;
}

double estimate_noise_floor(const Apdp &apdp, const NoiseWindowSpec &guard)
{
    if (apdp.power_db.empty())
        throw Error(Errc::InvalidInput, "empty APDP");

    const auto [first, last] = guard.bins(apdp.power_db.size());
    std::vector<double> window;
    window.reserve(last - first);
    for (std::size_t i = first; i < last; ++i)
        window.push_back(from_db(apdp.power_db[i]));
    return median_db(std::move(window));
}

double mpc_threshold_db(double noise_floor_db, double peak_db, const MpcThresholds &thresholds) noexcept
{
    return std::max(noise_floor_db + thresholds.floor_margin_db, peak_db - thresholds.peak_window_db);
}

MpcList extract_mpcs(const Apdp &apdp, const MpcThresholds &thresholds)
{
    if (apdp.power_db.empty())
        throw Error(Errc::InvalidInput, "empty APDP");
    if (!apdp.noise_floor_db)
        throw Error(Errc::InvalidInput, "APDP noise floor has not been estimated");

    const auto &p = apdp.power_db;
    const std::size_t n = p.size();
    const double peak_db = *std::max_element(p.begin(), p.end());

    MpcList out;
    out.threshold_db = mpc_threshold_db(*apdp.noise_floor_db, peak_db, thresholds);

    constexpr double edge = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < n)
    {
        // [i, j) is a run of equal values
        std::size_t j = i + 1;
        while (j < n && p[j] == p[i])
            ++j;

        const double left = i == 0 ? edge : p[i - 1];
        const double right = j == n ? edge : p[j];
        if (p[i] > left && p[i] > right && p[i] >= out.threshold_db)
            out.components.push_back({static_cast<double>(i) * apdp.delay_bin_s, p[i]});
        i = j;
    }

    if (out.components.empty())
        throw Error(Errc::EmptyMpcSet, "no APDP peak reaches the " + std::to_string(out.threshold_db) + " dB threshold");
    return out;
}

} // namespace chsound
