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

#ifndef CHSOUND_DISPERSION_HPP
#define CHSOUND_DISPERSION_HPP

#include "chsound/apdp_mpc.hpp"

#include <cstddef>
#include <span>

namespace chsound
{

struct DsResult
{
    double mean_excess_delay_s = 0.0; // power-weighted mean delay
    double rms_ds_s = 0.0;
    std::size_t n_mpcs = 0;
};

struct DsSummary
{
    double mean_ns = 0.0;
    double std_ns = 0.0; // population convention
};

// Power-weighted mean delay and RMS delay spread of the extracted components.
DsResult delay_spread(const MpcList &mpcs);

// Same statistic over raw APDP bins at or above min_power_db. Used for sensitivity
// studies against the MPC-based value.
DsResult delay_spread_bins(const Apdp &apdp, double min_power_db);

DsSummary aggregate_ds(std::span<const DsResult> results);

} // namespace chsound

#endif
