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

#include "chsound/report.hpp"
#include "chsound/dispersion.hpp"
#include "chsound/kfactor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include <fmt/format.h>

namespace chsound
{

namespace
{

using Key = std::pair<double, Scenario>;

std::map<Key, std::vector<const PositionReport *>> ok_by_group(std::span<const PositionReport> reports)
{
    std::map<Key, std::vector<const PositionReport *>> groups;
    for (const auto &r : reports)
        if (r.status == PositionStatus::OK)
            groups[{r.band_ghz, r.scenario}].push_back(&r);
    return groups;
}

// Fewer than two finite values leave nothing to fit.
std::optional<NormalFit> try_fit_normal(std::span<const double> values)
{
    if (std::count_if(values.begin(), values.end(), [](double v) { return std::isfinite(v); }) < 2)
        return std::nullopt;
    return fit_normal(values);
}

} // namespace

nlohmann::ordered_json summary_json(const CampaignManifest &manifest, std::span<const PositionReport> reports)
{
    nlohmann::ordered_json j;
    j["manifest"] = to_json(manifest);

    std::map<double, std::map<std::string, std::size_t>> counts;
    for (double band : manifest.bands_ghz)
        for (auto s : {PositionStatus::OK, PositionStatus::AllSnapshotsRejected, PositionStatus::EmptyMpcSet})
            counts[band][std::string(status_name(s))] = 0;
    for (const auto &r : reports)
        ++counts[r.band_ghz][std::string(status_name(r.status))];
    auto &sc = j["status_counts"] = nlohmann::ordered_json::array();
    for (const auto &[band, c] : counts)
    {
        nlohmann::ordered_json row = {{"band_ghz", band}};
        for (const auto &[name, n] : c)
            row[name] = n;
        sc.push_back(std::move(row));
    }

    const auto samples = pl_samples(reports);
    j["path_loss"] = fits_to_json(fit_groups(samples));

    auto ds = nlohmann::ordered_json::array();
    auto kf = nlohmann::ordered_json::array();
    for (const auto &[key, rows] : ok_by_group(reports))
    {
        std::vector<DsResult> ds_results;
        std::vector<double> kf_values;
        for (const auto *r : rows)
        {
            if (r->ds_ns)
                ds_results.push_back({0.0, *r->ds_ns * 1e-9, r->n_mpcs.value_or(0)});
            if (r->kf_db)
                kf_values.push_back(*r->kf_db);
        }
        if (!ds_results.empty())
        {
            const auto agg = aggregate_ds(ds_results);
            ds.push_back({{"band_ghz", key.first},
                          {"scenario", scenario_name(key.second)},
                          {"n_positions", ds_results.size()},
                          {"mean_ns", round_to(agg.mean_ns, 2)},
                          {"std_ns", round_to(agg.std_ns, 2)}});
        }

        if (key.second != Scenario::LOS)
            continue;
        nlohmann::ordered_json k = {{"band_ghz", key.first}, {"scenario", scenario_name(key.second)}};
        const auto fit = try_fit_normal(kf_values);
        k["n_used"] = fit ? fit->n_used : 0;
        k["n_pos_infinite"] = std::count(kf_values.begin(), kf_values.end(), std::numeric_limits<double>::infinity());
        k["n_neg_infinite"] = std::count(kf_values.begin(), kf_values.end(), -std::numeric_limits<double>::infinity());
        if (fit)
        {
            k["mu_db"] = round_to(fit->mu, 2);
            k["sigma_db"] = round_to(fit->sigma, 2);
            k["max_cdf_deviation"] = round_to(fit->max_cdf_deviation, 4);
        }
        else
        {
            k["mu_db"] = nullptr;
            k["sigma_db"] = nullptr;
        }
        kf.push_back(std::move(k));
    }
    j["delay_spread"] = std::move(ds);
    j["k_factor"] = std::move(kf);
    return j;
}

void write_report(const std::filesystem::path &out_dir, const CampaignManifest &manifest,
                  std::span<const PositionReport> reports, std::span<const ProfileRow> apdp,
                  std::span<const ProfileRow> mpcs)
{
    std::filesystem::create_directories(out_dir);
    save_json(out_dir / "summary.json", summary_json(manifest, reports));

    std::string scatter = "band_ghz,scenario,position_id,distance_m,pl_db\n";
    for (const auto &r : reports)
        if (r.status == PositionStatus::OK && r.pl_db)
            scatter += fmt::format("{:g},{},{},{:.3f},{}\n", r.band_ghz, scenario_name(r.scenario), r.position_id,
                                   round_to(r.distance_m, 3), format_2dp(*r.pl_db));
    write_text(out_dir / "pl_scatter.csv", scatter);

    std::string curves = "band_ghz,scenario,model,distance_m,pl_db\n";
    const auto samples = pl_samples(reports);
    constexpr int n_points = 50;
    for (const auto &g : fit_groups(samples))
    {
        double d_min = std::numeric_limits<double>::infinity();
        double d_max = 0.0;
        for (const auto &s : samples)
            if (s.frequency_ghz == g.band_ghz && s.scenario == g.scenario)
            {
                d_min = std::min(d_min, s.distance_m);
                d_max = std::max(d_max, s.distance_m);
            }
        if (!(d_max > 0.0))
            continue;
        const auto scen = scenario_name(g.scenario);
        for (int i = 0; i < n_points; ++i)
        {
            const double d = d_min * std::pow(d_max / d_min, static_cast<double>(i) / (n_points - 1));
            const double dr = round_to(d, 3);
            if (g.ci)
                curves += fmt::format("{:g},{},CI,{:.3f},{}\n", g.band_ghz, scen, dr,
                                      format_2dp(eval_ci(d, g.band_ghz, g.ci->ple)));
            if (g.fi)
                curves += fmt::format("{:g},{},FI,{:.3f},{}\n", g.band_ghz, scen, dr,
                                      format_2dp(eval_fi(d, g.fi->ple, *g.fi->offset_db)));
            curves += fmt::format("{:g},{},FSPL,{:.3f},{}\n", g.band_ghz, scen, dr, format_2dp(eval_fspl(d, g.band_ghz)));
        }
    }
    write_text(out_dir / "pl_curves.csv", curves);

    std::string cdf = "band_ghz,scenario,kf_db,empirical,fitted\n";
    for (const auto &[key, rows] : ok_by_group(reports))
    {
        if (key.second != Scenario::LOS)
            continue;
        std::vector<double> values;
        for (const auto *r : rows)
            if (r->kf_db)
                values.push_back(*r->kf_db);
        const auto fit = try_fit_normal(values);
        if (!fit)
            continue;
        for (const auto &p : fit->cdf)
            cdf += fmt::format("{:g},{},{},{:.4f},{:.4f}\n", key.first, scenario_name(key.second),
                               format_2dp(p.value_db), round_to(p.empirical, 4), round_to(p.fitted, 4));
    }
    write_text(out_dir / "kf_cdf.csv", cdf);

    std::map<std::pair<std::string, double>, double> first_mpc_ns;
    for (const auto &m : mpcs)
    {
        auto [it, inserted] = first_mpc_ns.try_emplace({m.position_id, m.band_ghz}, m.delay_ns);
        if (!inserted)
            it->second = std::min(it->second, m.delay_ns);
    }
    std::map<std::pair<std::string, double>, double> distance;
    for (const auto &r : reports)
        distance[{r.position_id, r.band_ghz}] = r.distance_m;

    std::string heat = "band_ghz,position_id,distance_m,excess_delay_ns,power_db\n";
    for (const auto &row : apdp)
    {
        const auto key = std::make_pair(row.position_id, row.band_ghz);
        auto first = first_mpc_ns.find(key);
        if (first == first_mpc_ns.end())
            continue;
        auto d = distance.find(key);
        heat += fmt::format("{:g},{},{:.3f},{:.3f},{}\n", row.band_ghz, row.position_id,
                            d == distance.end() ? 0.0 : round_to(d->second, 3),
                            round_to(row.delay_ns - first->second, 3), format_2dp(row.power_db));
    }
    write_text(out_dir / "apdp_heatmap.csv", heat);
}

} // namespace chsound
