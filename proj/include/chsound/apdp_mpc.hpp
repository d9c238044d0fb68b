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

#ifndef CHSOUND_APDP_MPC_HPP
#define CHSOUND_APDP_MPC_HPP

#include "chsound/calib_deconv.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace chsound
{

// Lowest power reported for an empty delay bin, keeps every dB value finite.
inline constexpr double min_power_db = -300.0;

double to_db(double linear_power) noexcept;
double from_db(double power_db) noexcept;

struct Apdp
{
    std::vector<double> power_db;
    double delay_bin_s = 0.0;
    std::optional<double> noise_floor_db;
    std::size_t n_averaged = 0;
};

struct Mpc
{
    double delay_s = 0.0;
    double power_db = 0.0;
};

struct MpcList
{
    std::vector<Mpc> components;
    double threshold_db = 0.0;
};

// Delay-bin window used for noise estimation, as fractions of the profile length.
// The default is the trailing quarter of the profile.
struct NoiseWindowSpec
{
    double start_fraction = 0.75;
    double end_fraction = 1.0;

    // Half-open bin range [first, second); throws InvalidInput when it is empty.
    std::pair<std::size_t, std::size_t> bins(std::size_t n_bins) const;
};

struct MpcThresholds
{
    double floor_margin_db = 6.0;  // threshold is at least noise floor + margin
    double peak_window_db = 25.0;  // and at least peak - window
};

// Median of the linear tap powers inside the window, in dB.
double cir_noise_floor_db(const Cir &cir, const NoiseWindowSpec &guard = {});

// Peak tap power minus the noise floor of the same CIR, in dB.
double cir_snr_db(const Cir &cir, const NoiseWindowSpec &guard = {});

// Indices of the CIRs passing the gate, possibly empty.
std::vector<std::size_t> snr_gate_indices(std::span<const Cir> cirs, double min_snr_db = 25.0,
                                          const NoiseWindowSpec &guard = {});

// Throws Errc::AllSnapshotsRejected when nothing passes.
std::vector<Cir> snr_gate(std::span<const Cir> cirs, double min_snr_db = 25.0, const NoiseWindowSpec &guard = {});

Apdp average_apdp(std::span<const Cir> cirs);

double estimate_noise_floor(const Apdp &apdp, const NoiseWindowSpec &guard = {});

double mpc_threshold_db(double noise_floor_db, double peak_db, const MpcThresholds &thresholds = {}) noexcept;

// Local maxima of the APDP at or above the decision threshold. A plateau counts as
// one peak located at its earliest bin; the profile edges behave as -inf neighbours.
MpcList extract_mpcs(const Apdp &apdp, const MpcThresholds &thresholds = {});

} // namespace chsound

#endif
