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

#include "chsound/largescale.hpp"
#include "chsound/error.hpp"

#include <cmath>

namespace chsound
{

std::string_view scenario_name(Scenario s) noexcept
{
    return s == Scenario::LOS ? "LOS" : "NLOS";
}

Scenario parse_scenario(std::string_view text)
{
    if (text == "LOS")
        return Scenario::LOS;
    if (text == "NLOS")
        return Scenario::NLOS;
    throw Error(Errc::InvalidInput, "unknown scenario '" + std::string(text) + "'");
}

double LinkBudget::offset_db() const noexcept
{
    return pt_dbm + gt_dbi + gr_dbi + pthr_dbm - ptht_dbm + gatt_db;
}

double received_power(const MpcList &mpcs)
{
    if (mpcs.components.empty())
        throw Error(Errc::EmptyMpcSet, "received power of an empty MPC list");

    double sum = 0.0;
    for (const auto &c : mpcs.components)
        sum += from_db(c.power_db);
    return 10.0 * std::log10(sum);
}

double path_loss(double pr_db, const LinkBudget &budget) noexcept
{
    return -pr_db + budget.pt_dbm + budget.gt_dbi + budget.gr_dbi + budget.pthr_dbm - budget.ptht_dbm + budget.gatt_db;
}

double eval_ci(double d_m, double f_ghz, double n)
{
    if (!(d_m > 0.0) || !(f_ghz > 0.0))
        throw Error(Errc::InvalidInput, "CI model needs positive distance and frequency");
    return 32.4 + 20.0 * std::log10(f_ghz) + 10.0 * n * std::log10(d_m);
}

double eval_fi(double d_m, double alpha, double beta_db)
{
    if (!(d_m > 0.0))
        throw Error(Errc::InvalidInput, "FI model needs a positive distance");
    return 10.0 * alpha * std::log10(d_m) + beta_db;
}

double eval_fspl(double d_m, double f_ghz)
{
    if (!(d_m > 0.0) || !(f_ghz > 0.0))
        throw Error(Errc::InvalidInput, "free-space model needs positive distance and frequency");
    return 32.4 + 20.0 * std::log10(f_ghz) + 20.0 * std::log10(d_m);
}

namespace
{

void check_samples(std::span<const PlSample> samples)
{
    for (const auto &s : samples)
    {
        if (!(s.distance_m > 0.0))
            throw Error(Errc::InvalidInput, "sample '" + s.position_id + "' has a non-positive distance");
        if (!std::isfinite(s.pl_db))
            throw Error(Errc::InvalidInput, "sample '" + s.position_id + "' has a non-finite path loss");
    }

    bool spread = false;
    for (const auto &s : samples)
        spread = spread || s.distance_m != samples.front().distance_m;
    if (samples.size() < 2 || !spread)
        throw Error(Errc::DegenerateGeometry, "path-loss fit needs at least two distinct distances");
}

void finish(PlFit &fit)
{
    double ss = 0.0;
    for (double r : fit.residuals_db)
        ss += r * r;
    fit.sigma_db = std::sqrt(ss / static_cast<double>(fit.residuals_db.size()));
}

} // namespace

PlFit fit_ci(std::span<const PlSample> samples)
{
    check_samples(samples);
    const double f_ghz = samples.front().frequency_ghz;
    for (const auto &s : samples)
        if (s.frequency_ghz != f_ghz)
            throw Error(Errc::InvalidInput, "CI fit mixes frequency bands");
    if (!(f_ghz > 0.0))
        throw Error(Errc::InvalidInput, "CI fit needs a positive frequency");

    const double fs_intercept = 32.4 + 20.0 * std::log10(f_ghz);
    double sum_ab = 0.0, sum_bb = 0.0;
    for (const auto &s : samples)
    {
        const double a = s.pl_db - fs_intercept;
        const double b = 10.0 * std::log10(s.distance_m);
        sum_ab += a * b;
        sum_bb += b * b;
    }
    if (sum_bb == 0.0)
        throw Error(Errc::DegenerateGeometry, "all samples sit at the 1 m reference distance");

    PlFit fit;
    fit.model = PlModel::CI;
    fit.ple = sum_ab / sum_bb;
    fit.n_samples = samples.size();
    for (const auto &s : samples)
    {
        fit.residuals_db.push_back(s.pl_db - eval_ci(s.distance_m, f_ghz, fit.ple));
        if (s.distance_m < 1.0)
            ++fit.n_below_reference;
    }
    finish(fit);
    return fit;
}

PlFit fit_fi(std::span<const PlSample> samples)
{
    check_samples(samples);

    const double n = static_cast<double>(samples.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto &s : samples)
    {
        mean_x += 10.0 * std::log10(s.distance_m);
        mean_y += s.pl_db;
    }
    mean_x /= n;
    mean_y /= n;

    double sxy = 0.0, sxx = 0.0;
    for (const auto &s : samples)
    {
        const double dx = 10.0 * std::log10(s.distance_m) - mean_x;
        sxy += dx * (s.pl_db - mean_y);
        sxx += dx * dx;
    }
    if (sxx == 0.0)
        throw Error(Errc::DegenerateGeometry, "all samples share one distance");

    PlFit fit;
    fit.model = PlModel::FI;
    fit.ple = sxy / sxx;
    fit.offset_db = mean_y - fit.ple * mean_x;
    fit.n_samples = samples.size();
    for (const auto &s : samples)
    {
        fit.residuals_db.push_back(s.pl_db - eval_fi(s.distance_m, fit.ple, *fit.offset_db));
        if (s.distance_m < 1.0)
            ++fit.n_below_reference;
    }
    finish(fit);
    return fit;
}

double residual_sum_of_squares(const PlFit &fit) noexcept
{
    double ss = 0.0;
    for (double r : fit.residuals_db)
        ss += r * r;
    return ss;
}

} // namespace chsound
