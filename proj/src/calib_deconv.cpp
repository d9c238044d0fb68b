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

#include "chsound/calib_deconv.hpp"
#include "chsound/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chsound
{

void validate_record(const ComplexRecord &record, std::size_t expected_len)
{
    if (record.samples.empty())
        throw Error(Errc::InvalidInput, "record has no samples");
    if (!(record.sample_rate_hz > 0.0) || !std::isfinite(record.sample_rate_hz))
        throw Error(Errc::InvalidInput, "record sample rate must be positive");
    if (expected_len != 0 && record.samples.size() != expected_len)
        throw Error(Errc::InvalidInput, "record length " + std::to_string(record.samples.size()) +
                                            " differs from configured length " + std::to_string(expected_len));
}

FrequencyResponse to_frequency_domain(const ComplexRecord &record)
{
    validate_record(record);

    FrequencyResponse out;
    out.bins = fft_forward(record.samples);
    out.bin_spacing_hz = record.sample_rate_hz / static_cast<double>(record.samples.size());
    out.center_frequency_hz = record.center_frequency_hz;
    return out;
}

std::vector<bool> kept_bin_mask(const FrequencyResponse &y_th, double floor_db)
{
    if (y_th.bins.empty())
        throw Error(Errc::InvalidInput, "empty calibration spectrum");

    double peak = 0.0;
    for (const auto &v : y_th.bins)
        peak = std::max(peak, std::abs(v));
    if (peak == 0.0)
        throw Error(Errc::DegenerateCalibration, "calibration spectrum is identically zero");

    const double limit = peak * std::pow(10.0, floor_db / 20.0);
    std::vector<bool> mask(y_th.bins.size());
    for (std::size_t k = 0; k < y_th.bins.size(); ++k)
        mask[k] = std::abs(y_th.bins[k]) >= limit;
    return mask;
}

FrequencyResponse deconvolve(const FrequencyResponse &y_rx, const FrequencyResponse &y_th, double floor_db)
{
    if (y_rx.bins.empty() || y_rx.bins.size() != y_th.bins.size())
        throw Error(Errc::InvalidInput, "received and calibration spectra must have equal, non-zero bin counts");

    const auto mask = kept_bin_mask(y_th, floor_db);

    FrequencyResponse h;
    h.bins.assign(y_rx.bins.size(), cplx(0.0, 0.0));
    h.bin_spacing_hz = y_rx.bin_spacing_hz;
    h.center_frequency_hz = y_rx.center_frequency_hz;
    for (std::size_t k = 0; k < h.bins.size(); ++k)
        if (mask[k])
        {
            // y_rx * conj(y_th) / |y_th|^2, so y_rx == y_th yields exactly 1.
            const cplx a = y_rx.bins[k];
            const cplx b = y_th.bins[k];
            const double den = b.real() * b.real() + b.imag() * b.imag();
            h.bins[k] = {(a.real() * b.real() + a.imag() * b.imag()) / den,
                         (a.imag() * b.real() - a.real() * b.imag()) / den};
        }
    return h;
}

Cir to_cir(const FrequencyResponse &h)
{
    if (h.bins.empty())
        throw Error(Errc::InvalidInput, "empty frequency response");
    if (!(h.bin_spacing_hz > 0.0))
        throw Error(Errc::InvalidInput, "bin spacing must be positive");

    Cir cir;
    cir.taps = fft_inverse(h.bins);
    cir.delay_bin_s = 1.0 / (h.bin_spacing_hz * static_cast<double>(h.bins.size()));
    return cir;
}

} // namespace chsound
