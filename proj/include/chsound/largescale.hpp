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

#ifndef CHSOUND_LARGESCALE_HPP
#define CHSOUND_LARGESCALE_HPP

#include "chsound/apdp_mpc.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chsound
{

enum class Scenario
{
    LOS,
    NLOS
};

std::string_view scenario_name(Scenario s) noexcept;
Scenario parse_scenario(std::string_view text);

// Link-budget constants entering the path-loss computation, all in dB units.
struct LinkBudget
{
    double pt_dbm = 20.0;   // transmit power during the measurement
    double ptht_dbm = 20.0; // transmit power during back-to-back calibration
    double pthr_dbm = -10.0; // received power during back-to-back calibration
    double gt_dbi = 2.0;
    double gr_dbi = 2.0;
    double gatt_db = 30.0;  // attenuator inserted for calibration

    // Sum of all terms except -P_r: PL = offset_db() - P_r
    double offset_db() const noexcept;
};

struct PlSample
{
    std::string position_id;
    double distance_m = 0.0;
    double frequency_ghz = 0.0;
    double pl_db = 0.0;
    Scenario scenario = Scenario::LOS;
};

enum class PlModel
{
    CI,
    FI
};

struct PlFit
{
    PlModel model = PlModel::CI;
    double ple = 0.0;                   // n for CI, alpha for FI
    std::optional<double> offset_db;    // beta, FI only
    double sigma_db = 0.0;              // population std of the residuals (shadow fading)
    std::size_t n_samples = 0;
    std::size_t n_below_reference = 0;  // samples closer than the 1 m CI anchor
    std::vector<double> residuals_db;   // measured minus model, in input order
};

// Linear sum of the MPC powers, in dB
double received_power(const MpcList &mpcs);

double path_loss(double pr_db, const LinkBudget &budget) noexcept;

double eval_ci(double d_m, double f_ghz, double n);
double eval_fi(double d_m, double alpha, double beta_db);
double eval_fspl(double d_m, double f_ghz);

// Closed-form least squares for the PLE with the 1 m free-space anchor.
PlFit fit_ci(std::span<const PlSample> samples);

// Ordinary least squares of PL against 10 log10(d).
PlFit fit_fi(std::span<const PlSample> samples);

double residual_sum_of_squares(const PlFit &fit) noexcept;

} // namespace chsound

#endif
