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

#ifndef CHSOUND_CALIB_DECONV_HPP
#define CHSOUND_CALIB_DECONV_HPP

#include "chsound/fft.hpp"

#include <cstddef>
#include <vector>

namespace chsound
{

enum class RecordKind
{
    Calibration = 0,
    Measurement = 1
};

// Uniformly sampled complex baseband record as delivered by the sounder.
// For a calibration record this is u(t)*g_th(t), for a measurement u(t)*g_th(t)*h(t).
struct ComplexRecord
{
    std::vector<cplx> samples;
    double sample_rate_hz = 0.0;
    RecordKind kind = RecordKind::Measurement;
    double center_frequency_hz = 0.0; // carried through from the capture metadata, 0 when unknown
};

struct FrequencyResponse
{
    std::vector<cplx> bins;
    double bin_spacing_hz = 0.0;
    double center_frequency_hz = 0.0;
};

struct Cir
{
    std::vector<cplx> taps;
    double delay_bin_s = 0.0; // seconds per tap, 1 / bandwidth
};

// Throws Errc::InvalidInput for an empty record, a non-positive rate, or a record
// whose length differs from expected_len (when expected_len != 0).
void validate_record(const ComplexRecord &record, std::size_t expected_len = 0);

FrequencyResponse to_frequency_domain(const ComplexRecord &record);

// Bins where |y_th| >= peak|y_th| * 10^(floor_db/20). These are the bins kept by deconvolve().
std::vector<bool> kept_bin_mask(const FrequencyResponse &y_th, double floor_db);

// H(f) = Y_rx(f) / Y_th(f) on kept bins, 0 elsewhere.
FrequencyResponse deconvolve(const FrequencyResponse &y_rx, const FrequencyResponse &y_th, double floor_db = -40.0);

Cir to_cir(const FrequencyResponse &h);

} // namespace chsound

#endif
